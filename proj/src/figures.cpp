#include "crdsa/figures.hpp"

#include "crdsa/csv.hpp"
#include "crdsa/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace crdsa {

std::vector<double> parse_grid(std::string_view text) {
  auto number = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ')
      s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
      s.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw domain_error("bad number '" + std::string(s) + "' in grid '" + std::string(text) + "'");
    return v;
  };

  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    const std::size_t c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(number(item));
    } else {
      const std::size_t c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos)
        throw domain_error("range '" + std::string(item) + "' must be start:stop:step");
      const double start = number(item.substr(0, c1));
      const double stop = number(item.substr(c1 + 1, c2 - c1 - 1));
      const double step = number(item.substr(c2 + 1));
      if (!(step > 0.0) || stop < start)
        throw domain_error("range '" + std::string(item) + "' needs step > 0 and stop >= start");
      const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 0.5));
      for (std::int64_t k = 0; k <= count; ++k) {
        // snap to the step's decimal resolution so 0.1 + 3 * 0.05 prints as 0.25
        const double v = start + static_cast<double>(k) * step;
        out.push_back(std::round(v * 1e12) / 1e12);
      }
    }
    pos = end + 1;
  }
  return out;
}

std::vector<double> figure_load_grid() { return parse_grid("0.1:1.2:0.05"); }

std::vector<ExperimentConfig> figure_sweep_configs(const FigureOptions &options) {
  auto base = [&](Scheme scheme, DegreeDistribution dist) {
    ExperimentConfig c;
    c.scheme = scheme;
    c.distribution = std::move(dist);
    c.window = options.window;
    c.max_iterations = options.max_iterations;
    c.memory_multiplier = options.memory_multiplier;
    c.loads = figure_load_grid();
    c.snr_db = {0.0, 6.0, 12.0, 18.0};
    c.total_slots = options.total_slots;
    c.seed = options.seed;
    return c;
  };
  std::vector<ExperimentConfig> configs;
  configs.push_back(base(Scheme::sa, make_regular(1)));
  for (Scheme s : {Scheme::fb_crdsa, Scheme::sw_crdsa})
    for (const auto &d : {make_regular(2), make_regular(3), irsa8_preset()})
      configs.push_back(base(s, d));
  return configs;
}

PopulationModel figure_population_model() { return {1000, 0.0005, 0.0012}; }

std::vector<FigureFile> make_figures(const FigureOptions &options) {
  const auto configs = figure_sweep_configs(options);
  const auto rows = sweep(configs, options.threads);

  auto select = [&](auto keep) {
    std::vector<SweepRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), keep);
    return out;
  };
  const auto crdsa_only = select([](const SweepRow &r) {
    return r.scheme != Scheme::sa && r.snr_db == 0.0;
  });

  std::vector<FigureFile> files;
  files.push_back({"fig2.csv", sweep_csv(crdsa_only)});
  files.push_back({"fig3.csv", sweep_csv(crdsa_only)});
  files.push_back({"fig4.csv", sweep_csv(select([](const SweepRow &r) { return r.snr_db == 0.0; }))});
  files.push_back({"fig5.csv", sweep_csv(select([](const SweepRow &r) { return r.snr_db == 6.0; }))});
  files.push_back({"fig6.csv", sweep_csv(select([](const SweepRow &r) {
                     return r.snr_db == 12.0 || r.snr_db == 18.0;
                   }))});

  const auto sw_x2 = select([](const SweepRow &r) {
    return r.scheme == Scheme::sw_crdsa && r.distribution == "x^2" && r.snr_db == 0.0;
  });
  std::vector<std::pair<double, double>> samples;
  for (const auto &r : sw_x2)
    samples.emplace_back(r.load, r.stats.throughput);
  const ThroughputCurve curve(std::move(samples));
  const PopulationModel model = figure_population_model();
  const auto equilibria = find_equilibria(model, curve, 10000);
  const auto contour = equilibrium_contour(model, curve, 201);
  std::ostringstream os;
  write_stability_csv(os, contour, equilibria, model);
  files.push_back({"fig7.csv", os.str()});
  return files;
}

} // namespace crdsa
