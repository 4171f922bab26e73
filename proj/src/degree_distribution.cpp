#include "crdsa/degree_distribution.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace crdsa {

namespace {

constexpr double kMassTolerance = 1e-9;

std::string format_coefficient(double p) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << p;
  return os.str();
}

} // namespace

DegreeDistribution::DegreeDistribution(std::vector<DegreeTerm> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty())
    throw domain_error("degree distribution has no terms");
  std::sort(terms_.begin(), terms_.end(),
            [](const DegreeTerm &a, const DegreeTerm &b) { return a.degree < b.degree; });

  double mass = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto &t = terms_[i];
    if (t.degree < 1)
      throw domain_error("invalid degree " + std::to_string(t.degree) + " (must be >= 1)");
    if (i > 0 && terms_[i - 1].degree == t.degree)
      throw domain_error("duplicate degree " + std::to_string(t.degree));
    if (!(t.probability > 0.0) || t.probability > 1.0)
      throw domain_error("probability for degree " + std::to_string(t.degree) +
                         " must lie in (0, 1]");
    mass += t.probability;
    mean_ += t.degree * t.probability;
  }
  if (std::abs(mass - 1.0) > kMassTolerance)
    throw domain_error("degree probabilities sum to " + format_coefficient(mass) +
                       ", expected 1");

  cdf_.reserve(terms_.size());
  double acc = 0.0;
  for (const auto &t : terms_) {
    acc += t.probability;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

int DegreeDistribution::sample(double u) const noexcept {
  // first bin whose upper edge is strictly above u
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end())
    return terms_.back().degree;
  return terms_[static_cast<std::size_t>(it - cdf_.begin())].degree;
}

std::string DegreeDistribution::to_string() const {
  std::string out;
  for (const auto &t : terms_) {
    if (!out.empty())
      out += '+';
    if (t.probability != 1.0)
      out += format_coefficient(t.probability);
    out += 'x';
    if (t.degree != 1)
      out += '^' + std::to_string(t.degree);
  }
  return out;
}

DegreeDistribution make_regular(int degree) {
  if (degree < 1)
    throw domain_error("invalid degree " + std::to_string(degree) + " (must be >= 1)");
  return DegreeDistribution({{degree, 1.0}});
}

DegreeDistribution irsa8_preset() {
  return DegreeDistribution({{2, 0.5}, {3, 0.28}, {8, 0.22}});
}

DegreeDistribution parse_distribution(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  if (s == "irsa8")
    return irsa8_preset();
  if (s.empty())
    throw domain_error("empty degree distribution");

  auto bad = [&](const std::string &why) {
    return domain_error("cannot parse degree distribution '" + std::string(text) + "': " + why);
  };

  std::vector<DegreeTerm> terms;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find('+', pos);
    if (end == std::string::npos)
      end = s.size();
    std::string_view term(s.data() + pos, end - pos);
    if (term.empty())
      throw bad("empty term");

    std::size_t xpos = term.find('x');
    if (xpos == std::string_view::npos)
      throw bad("term '" + std::string(term) + "' has no 'x'");

    double coeff = 1.0;
    if (xpos > 0) {
      std::string_view c = term.substr(0, xpos);
      if (c.back() == '*')
        c.remove_suffix(1);
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), coeff);
      if (ec != std::errc() || ptr != c.data() + c.size())
        throw bad("bad coefficient '" + std::string(c) + "'");
    }

    int degree = 1;
    std::string_view rest = term.substr(xpos + 1);
    if (!rest.empty()) {
      if (rest.front() != '^' || rest.size() < 2)
        throw bad("bad exponent in '" + std::string(term) + "'");
      rest.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), degree);
      if (ec != std::errc() || ptr != rest.data() + rest.size())
        throw bad("bad exponent '" + std::string(rest) + "'");
    }
    terms.push_back({degree, coeff});
    pos = end + 1;
  }
  return DegreeDistribution(std::move(terms));
}

std::string distribution_id(const DegreeDistribution &d) {
  if (d == irsa8_preset())
    return "irsa8";
  return d.to_string();
}

} // namespace crdsa
