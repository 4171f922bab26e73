#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crdsa {

struct DegreeTerm {
  int degree;
  double probability;

  bool operator==(const DegreeTerm &) const = default;
};

/// Burst-degree distribution Lambda(x) = sum_l Lambda_l x^l.
///
/// Immutable once constructed. The constructor sorts terms by degree and
/// rejects duplicate degrees, non-positive probabilities and probability
/// mass that does not sum to one (within 1e-9).
class DegreeDistribution {
public:
  explicit DegreeDistribution(std::vector<DegreeTerm> terms);

  const std::vector<DegreeTerm> &terms() const noexcept { return terms_; }
  int max_degree() const noexcept { return terms_.back().degree; }
  int min_degree() const noexcept { return terms_.front().degree; }

  /// Lambda'(1), the average number of replicas per packet.
  double mean_degree() const noexcept { return mean_; }

  /// Inverse-CDF sampling over ascending degrees using half-open bins
  /// [lo, hi). A u that lands exactly on a boundary picks the higher bin.
  int sample(double u) const noexcept;

  /// Polynomial text form, e.g. "x^2" or "0.5x^2+0.28x^3+0.22x^8".
  std::string to_string() const;

  bool operator==(const DegreeDistribution &) const = default;

private:
  std::vector<DegreeTerm> terms_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
};

DegreeDistribution make_regular(int degree);

inline double mean_degree(const DegreeDistribution &d) { return d.mean_degree(); }
inline int sample_degree(const DegreeDistribution &d, double u) { return d.sample(u); }

/// Stand-in for the variable-degree distribution with maximum degree 8:
/// {(2, 0.5), (3, 0.28), (8, 0.22)}. These coefficients come from the IRSA
/// literature, not from a measured optimum for finite windows.
DegreeDistribution irsa8_preset();

/// Parses the polynomial syntax ("x", "x^3", "0.5x^2 + 0.5 x^3") or a preset
/// name ("irsa8"). Whitespace is ignored; a missing coefficient means 1.
DegreeDistribution parse_distribution(std::string_view text);

/// Stable identifier used in CSV output and seed derivation. Presets keep
/// their name; everything else uses to_string().
std::string distribution_id(const DegreeDistribution &d);

} // namespace crdsa
