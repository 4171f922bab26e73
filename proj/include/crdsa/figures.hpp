#pragma once

#include "crdsa/engine.hpp"
#include "crdsa/stability.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crdsa {

struct FigureOptions {
  std::uint64_t seed = 1;
  std::int64_t total_slots = 200000;
  int window = 200;
  int max_iterations = 50;
  int memory_multiplier = 5;
  unsigned threads = 0;
};

struct FigureFile {
  std::string name;      // e.g. "fig2.csv"
  std::string contents;
};

/// G from 0.1 to 1.2 in steps of 0.05.
std::vector<double> figure_load_grid();

/// SA plus {FB, SW} x {x^2, x^3, irsa8} over the figure grid at SNR 0/6/12/18 dB.
std::vector<ExperimentConfig> figure_sweep_configs(const FigureOptions &options);

/// Closed-loop population used for fig7: a single sink near G = 0.5 on the
/// SW(x^2) throughput curve.
PopulationModel figure_population_model();

/// fig2 throughput and fig3 PLR (CRDSA variants only), fig4/fig5/fig6
/// efficiency at 0, 6 and 12+18 dB (with SA), fig7 equilibrium contour.
std::vector<FigureFile> make_figures(const FigureOptions &options);

/// Parses "start:stop:step" ranges (inclusive within half a step) and
/// comma-separated lists of numbers and ranges.
std::vector<double> parse_grid(std::string_view text);

} // namespace crdsa
