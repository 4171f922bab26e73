#pragma once

#include "crdsa/engine.hpp"
#include "crdsa/stability.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crdsa {

inline constexpr std::string_view kSweepHeader =
    "scheme,dist,G,snr_db,slots,sent,decoded,lost,plr,plr_ci_low,plr_ci_high,throughput,"
    "mean_degree,D,eta,mean_delay_slots,seed";
inline constexpr std::string_view kStabilityHeader =
    "n_b,g_tx,g_retx,g_total,throughput,kind,globally_stable";

/// Six significant digits, shortest form, '.' decimal point regardless of locale.
std::string format_number(double value);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);
std::string sweep_csv(const std::vector<SweepRow> &rows);

/// Contour rows carry kind "curve"; equilibrium rows carry "stable" or
/// "unstable". Every row repeats the globally_stable flag of the set.
void write_stability_csv(std::ostream &out, const std::vector<ContourRow> &contour,
                         const EquilibriumSet &equilibria, const PopulationModel &model);

struct CurveSelection {
  std::optional<std::string> scheme;        // "SA" / "FB" / "SW"
  std::optional<std::string> distribution;  // dist column value
};

/// Reads T(G) from a sweep CSV. Rows are filtered by `selection`; the rows
/// left must belong to a single (scheme, dist) series. Duplicate G values
/// (one per SNR) must agree on throughput.
ThroughputCurve read_throughput_curve(std::istream &in, const CurveSelection &selection = {});
ThroughputCurve read_throughput_curve(const std::filesystem::path &path,
                                      const CurveSelection &selection = {});

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

} // namespace crdsa
