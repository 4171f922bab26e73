#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace crdsa {

/// Aggregated outcome of one simulated load point.
struct RunStats {
  double offered_load = 0.0;        // G, logical packets per slot
  std::int64_t packets_sent = 0;
  std::int64_t packets_decoded = 0;
  std::int64_t packets_lost = 0;
  std::int64_t measured_slots = 0;
  double mean_delay_slots = 0.0;    // diagnostic only
  double plr = 0.0;
  double throughput = 0.0;
};

/// Fills plr and throughput from the packet counters.
void finalize(RunStats &stats);

struct EfficiencyPoint {
  double offered_load = 0.0;
  std::string scheme;
  std::string distribution;
  double snr_linear = 0.0;
  double power_ratio = 0.0;   // D = mean_degree * G
  double eta = 0.0;
};

/// T = G (1 - PLR).
double throughput(double load, double plr);

/// Normalized efficiency under an average-power constraint:
///   eta = T log(1 + snr / D) / log(1 + snr),  D = mean_degree * G.
/// Returns 0 for G = 0.
double normalized_efficiency(double throughput, double load, double mean_degree,
                             double snr_linear);

double snr_db_to_linear(double snr_db);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double confidence);

/// Two-sided standard normal quantile z such that P(|Z| <= z) = confidence.
double normal_quantile_two_sided(double confidence);

} // namespace crdsa
