#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace crdsa {

/// Finite user population with stationary geometric transmission policies.
struct PopulationModel {
  int population = 1;      // M
  double p_tx = 0.0;       // per-slot start probability of a non-backlogged user
  double p_retx = 0.0;     // per-slot retry probability of a backlogged user

  void validate() const;
};

struct OfferedLoads {
  double g_tx;
  double g_retx;
  double g_total;
};

/// G_tx = (M - n_b) p_tx, G_retx = n_b p_retx, G = G_tx + G_retx.
OfferedLoads offered_loads(const PopulationModel &model, double n_b);

/// Open-loop throughput T(G) sampled on a strictly increasing G grid and
/// linearly interpolated. The origin (0, 0) is added when the samples start
/// above G = 0, since no traffic means no throughput. Evaluation outside the
/// sampled range throws.
class ThroughputCurve {
public:
  explicit ThroughputCurve(std::vector<std::pair<double, double>> samples);

  double operator()(double load) const;
  double min_load() const noexcept { return samples_.front().first; }
  double max_load() const noexcept { return samples_.back().first; }
  bool covers(double lo, double hi) const noexcept;
  const std::vector<std::pair<double, double>> &samples() const noexcept { return samples_; }

private:
  std::vector<std::pair<double, double>> samples_;
};

/// Balance between new traffic and throughput as functions of the backlog
/// n_b over [n_min, n_max]. Equilibria are the zeros of
/// f(n_b) = new_traffic(n_b) - throughput(n_b).
struct LoadBalance {
  std::function<double(double)> new_traffic;
  std::function<double(double)> throughput;
  double n_min = 0.0;
  double n_max = 0.0;

  double imbalance(double n_b) const { return new_traffic(n_b) - throughput(n_b); }
};

LoadBalance make_load_balance(const PopulationModel &model, const ThroughputCurve &curve);

enum class EquilibriumKind { stable, unstable };

struct Classification {
  EquilibriumKind kind = EquilibriumKind::unstable;
  bool tangent = false;   // neither sink nor source
};

struct EquilibriumPoint {
  double n_b_star = 0.0;
  double g_tx_star = 0.0;
  double throughput_star = 0.0;
  EquilibriumKind kind = EquilibriumKind::unstable;
  bool tangent = false;
};

struct EquilibriumSet {
  std::vector<EquilibriumPoint> points;
  bool globally_stable = false;
};

inline constexpr double kRootTolerance = 1e-6;

/// Sink if the backlog grows below the root and shrinks above it
/// (new traffic above throughput on the left, below on the right), source if
/// reversed. Neighbourhoods outside [n_min, n_max] are dropped and the
/// remaining side decides.
Classification classify_equilibrium(const LoadBalance &balance, double n_star, double epsilon);

/// Sign-change scan over `resolution` equal intervals plus bisection.
EquilibriumSet find_equilibria(const LoadBalance &balance, int resolution);

/// Model-driven variant; throws a coverage error if the curve does not span
/// every total load the model can produce.
EquilibriumSet find_equilibria(const PopulationModel &model, const ThroughputCurve &curve,
                               int resolution);

/// True iff there is exactly one equilibrium and it is stable.
bool global_stability(const std::vector<EquilibriumPoint> &points);

struct ContourRow {
  double n_b;
  OfferedLoads loads;
  double throughput;
};

/// Tabulates loads and throughput on `n_points` evenly spaced backlog values
/// spanning [0, M].
std::vector<ContourRow> equilibrium_contour(const PopulationModel &model,
                                            const ThroughputCurve &curve, int n_points);

} // namespace crdsa
