#pragma once

#include "crdsa/decoder.hpp"
#include "crdsa/degree_distribution.hpp"
#include "crdsa/metrics.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crdsa {

enum class Scheme { sa, fb_crdsa, sw_crdsa };

/// "SA", "FB" or "SW".
std::string scheme_name(Scheme scheme);
/// Accepts sa / fb / sw (and the long forms fb_crdsa, sw-crdsa), any case.
Scheme parse_scheme(std::string_view text);

struct ExperimentConfig {
  Scheme scheme = Scheme::sw_crdsa;
  DegreeDistribution distribution = make_regular(2);
  int window = 200;                  // N_S for FB, N_sw for SW
  int max_iterations = 50;           // I_max
  int memory_multiplier = 5;         // SW receiver keeps multiplier * window slots
  std::vector<double> loads;         // G grid
  std::vector<double> snr_db{0.0};
  std::int64_t total_slots = 200000;
  std::optional<std::int64_t> warmup_slots;  // default 10 * window
  std::uint64_t seed = 1;
  double confidence = 0.95;

  /// Throws a config error for infeasible settings.
  void validate() const;

  std::int64_t effective_warmup() const { return warmup_slots.value_or(10LL * window); }
  int buffer_capacity() const { return memory_multiplier * window; }
  /// Slotted Aloha always sends exactly one copy.
  DegreeDistribution effective_distribution() const;
  std::string distribution_label() const;
};

struct PointResult {
  RunStats stats;
  double plr_ci_low = 0.0;
  double plr_ci_high = 0.0;
  std::uint64_t seed = 0;
  int peak_iterations = 0;
};

using TraceSink = std::function<void(const DecoderEvent &)>;

/// Seed for one load point, derived from the master seed, scheme,
/// distribution and the G value itself so that grid order does not matter.
std::uint64_t point_seed(const ExperimentConfig &config, double load);

/// Simulates one load point end to end: Poisson arrivals, replica placement,
/// decoding, drain, and statistics over packets ready at or after the warm-up.
PointResult run_point(const ExperimentConfig &config, double load,
                      const TraceSink &trace = nullptr);

struct SweepRow {
  Scheme scheme;
  std::string distribution;
  double load;
  double snr_db;
  std::int64_t slots;
  RunStats stats;
  double plr_ci_low;
  double plr_ci_high;
  double mean_degree;
  double power_ratio;
  double eta;
  std::uint64_t seed;
};

/// Builds a per-point trace sink; used only when tracing is requested.
using TraceFactory = std::function<TraceSink(const ExperimentConfig &, double load)>;

/// Runs every (config, G) point, in parallel over `threads` workers (0 picks
/// the hardware concurrency), and expands each into one row per SNR.
/// Rows come out ordered by config, then G grid order, then SNR order.
/// Tracing forces a single worker so trace lines stay grouped by point.
std::vector<SweepRow> sweep(std::span<const ExperimentConfig> configs, unsigned threads = 0,
                            const TraceFactory &trace = nullptr);
std::vector<SweepRow> sweep(const ExperimentConfig &config, unsigned threads = 0);

} // namespace crdsa
