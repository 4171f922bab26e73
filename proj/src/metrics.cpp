#include "crdsa/metrics.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crdsa {

void finalize(RunStats &stats) {
  stats.plr = stats.packets_sent == 0
                  ? 0.0
                  : static_cast<double>(stats.packets_lost) / static_cast<double>(stats.packets_sent);
  stats.throughput = throughput(stats.offered_load, stats.plr);
}

double throughput(double load, double plr) {
  if (!(plr >= 0.0 && plr <= 1.0))
    throw domain_error("PLR " + std::to_string(plr) + " outside [0, 1]");
  if (!(load >= 0.0))
    throw domain_error("load " + std::to_string(load) + " must be >= 0");
  return load * (1.0 - plr);
}

double normalized_efficiency(double throughput, double load, double mean_degree,
                             double snr_linear) {
  if (!(snr_linear > 0.0))
    throw domain_error("SNR must be positive");
  if (!(mean_degree >= 1.0))
    throw domain_error("mean degree must be >= 1");
  if (!(throughput >= 0.0) || !(load >= 0.0))
    throw domain_error("throughput and load must be >= 0");
  if (load == 0.0)
    return 0.0;
  const double power_ratio = mean_degree * load;
  if (power_ratio == 1.0)
    return throughput;
  return throughput * std::log1p(snr_linear / power_ratio) / std::log1p(snr_linear);
}

double snr_db_to_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw domain_error("confidence must lie in (0, 1)");
  // Solve erf(z / sqrt 2) = confidence by Newton on a monotone function.
  double z = 2.0;
  for (int i = 0; i < 60; ++i) {
    const double f = std::erf(z / std::sqrt(2.0)) - confidence;
    const double df = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z);
    const double step = f / df;
    z = std::max(z - step, 1e-12);
    if (std::abs(step) < 1e-15)
      break;
  }
  return z;
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence) {
  if (trials < 1)
    throw domain_error("Wilson interval needs at least one trial");
  if (successes < 0 || successes > trials)
    throw domain_error("successes outside [0, trials]");
  const double z = normal_quantile_two_sided(confidence);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {low, high};
}

} // namespace crdsa
