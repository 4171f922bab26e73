#include "crdsa/stability.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crdsa {

void PopulationModel::validate() const {
  if (population < 1)
    throw domain_error("population must be >= 1");
  if (!(p_tx >= 0.0 && p_tx <= 1.0))
    throw domain_error("p_tx must lie in [0, 1]");
  if (!(p_retx >= 0.0 && p_retx <= 1.0))
    throw domain_error("p_retx must lie in [0, 1]");
}

OfferedLoads offered_loads(const PopulationModel &model, double n_b) {
  model.validate();
  const double m = model.population;
  if (!(n_b >= 0.0 && n_b <= m))
    throw domain_error("backlog " + std::to_string(n_b) + " outside [0, M]");
  const double g_tx = (m - n_b) * model.p_tx;
  const double g_retx = n_b * model.p_retx;
  return {g_tx, g_retx, g_tx + g_retx};
}

// --- ThroughputCurve --------------------------------------------------------

ThroughputCurve::ThroughputCurve(std::vector<std::pair<double, double>> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty())
    throw domain_error("throughput curve has no samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto [g, t] = samples_[i];
    if (!std::isfinite(g) || !std::isfinite(t) || g < 0.0)
      throw domain_error("throughput curve sample with invalid G");
    if (i > 0 && !(g > samples_[i - 1].first))
      throw domain_error("throughput curve G values must be strictly increasing");
    if (t < 0.0 || t > g * (1.0 + 1e-9) + 1e-12)
      throw domain_error("throughput curve sample violates 0 <= T <= G at G=" + std::to_string(g));
  }
  if (samples_.front().first > 0.0)
    samples_.insert(samples_.begin(), {0.0, 0.0});
}

bool ThroughputCurve::covers(double lo, double hi) const noexcept {
  return lo >= min_load() && hi <= max_load();
}

double ThroughputCurve::operator()(double load) const {
  // tolerate rounding at the ends of the range
  const double slack = 1e-12 * std::max(1.0, max_load());
  if (load < min_load() - slack || load > max_load() + slack)
    throw domain_error("load " + std::to_string(load) + " outside throughput curve range [" +
                       std::to_string(min_load()) + ", " + std::to_string(max_load()) + "]");
  load = std::clamp(load, min_load(), max_load());
  auto hi = std::lower_bound(samples_.begin(), samples_.end(), load,
                             [](const auto &s, double g) { return s.first < g; });
  if (hi == samples_.begin())
    return hi->second;
  if (hi->first == load)
    return hi->second;
  auto lo = hi - 1;
  const double w = (load - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

// --- equilibria -------------------------------------------------------------

LoadBalance make_load_balance(const PopulationModel &model, const ThroughputCurve &curve) {
  model.validate();
  const double g_first = offered_loads(model, 0.0).g_total;
  const double g_last = offered_loads(model, model.population).g_total;
  const double lo = std::min(g_first, g_last);
  const double hi = std::max(g_first, g_last);
  if (!curve.covers(lo, hi))
    throw config_error("throughput curve covers G in [" + std::to_string(curve.min_load()) + ", " +
                       std::to_string(curve.max_load()) + "] but the model needs [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
  LoadBalance b;
  b.new_traffic = [model](double n) { return offered_loads(model, n).g_tx; };
  b.throughput = [model, curve](double n) { return curve(offered_loads(model, n).g_total); };
  b.n_min = 0.0;
  b.n_max = model.population;
  return b;
}

Classification classify_equilibrium(const LoadBalance &balance, double n_star, double epsilon) {
  if (!(epsilon > 0.0))
    throw domain_error("epsilon must be positive");
  const double left = n_star - epsilon;
  const double right = n_star + epsilon;
  const bool has_left = left >= balance.n_min;
  const bool has_right = right <= balance.n_max;

  // f > 0: new traffic exceeds throughput, so the backlog grows
  const double f_left = has_left ? balance.imbalance(left) : 0.0;
  const double f_right = has_right ? balance.imbalance(right) : 0.0;

  Classification c;
  if (has_left && has_right) {
    if (f_left > 0.0 && f_right < 0.0)
      c.kind = EquilibriumKind::stable;
    else if (!(f_left < 0.0 && f_right > 0.0))
      c.tangent = true;
  } else if (has_right) {
    if (f_right < 0.0)
      c.kind = EquilibriumKind::stable;
    else if (f_right == 0.0)
      c.tangent = true;
  } else if (has_left) {
    if (f_left > 0.0)
      c.kind = EquilibriumKind::stable;
    else if (f_left == 0.0)
      c.tangent = true;
  } else {
    c.tangent = true;
  }
  return c;
}

namespace {

double bisect(const LoadBalance &b, double lo, double hi, double f_lo) {
  const double width_floor = 1e-14 * std::max(1.0, std::abs(b.n_max));
  double best = lo;
  double best_f = std::abs(f_lo);
  for (int i = 0; i < 200 && hi - lo > width_floor; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = b.imbalance(mid);
    if (std::abs(f_mid) < best_f) {
      best = mid;
      best_f = std::abs(f_mid);
    }
    if (f_mid == 0.0)
      break;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double f_hi = std::abs(b.imbalance(hi));
  return f_hi < best_f ? hi : best;
}

} // namespace

EquilibriumSet find_equilibria(const LoadBalance &balance, int resolution) {
  if (resolution < 1)
    throw domain_error("grid resolution must be >= 1");
  if (!(balance.n_max > balance.n_min))
    throw domain_error("empty backlog range");

  const double step = (balance.n_max - balance.n_min) / resolution;
  const double epsilon = 0.1 * step;
  std::vector<double> roots;

  double prev_n = balance.n_min;
  double prev_f = balance.imbalance(prev_n);
  if (prev_f == 0.0)
    roots.push_back(prev_n);
  for (int i = 1; i <= resolution; ++i) {
    const double n = i == resolution ? balance.n_max : balance.n_min + step * i;
    const double f = balance.imbalance(n);
    if (f == 0.0)
      roots.push_back(n);
    else if (prev_f != 0.0 && (prev_f > 0.0) != (f > 0.0))
      roots.push_back(bisect(balance, prev_n, n, prev_f));
    prev_n = n;
    prev_f = f;
  }

  EquilibriumSet out;
  for (double r : roots) {
    EquilibriumPoint p;
    p.n_b_star = r;
    p.g_tx_star = balance.new_traffic(r);
    p.throughput_star = balance.throughput(r);
    const Classification c = classify_equilibrium(balance, r, epsilon);
    p.kind = c.kind;
    p.tangent = c.tangent;
    out.points.push_back(p);
  }
  out.globally_stable = global_stability(out.points);
  return out;
}

EquilibriumSet find_equilibria(const PopulationModel &model, const ThroughputCurve &curve,
                               int resolution) {
  return find_equilibria(make_load_balance(model, curve), resolution);
}

bool global_stability(const std::vector<EquilibriumPoint> &points) {
  return points.size() == 1 && points.front().kind == EquilibriumKind::stable &&
         !points.front().tangent;
}

std::vector<ContourRow> equilibrium_contour(const PopulationModel &model,
                                            const ThroughputCurve &curve, int n_points) {
  if (n_points < 2)
    throw domain_error("contour needs at least two points");
  const LoadBalance balance = make_load_balance(model, curve);
  std::vector<ContourRow> rows;
  rows.reserve(static_cast<std::size_t>(n_points));
  const double m = model.population;
  for (int i = 0; i < n_points; ++i) {
    const double n = i == n_points - 1 ? m : m * i / (n_points - 1);
    rows.push_back({n, offered_loads(model, n), balance.throughput(n)});
  }
  return rows;
}

} // namespace crdsa
