#include "crdsa/csv.hpp"
#include "crdsa/decoder.hpp"
#include "crdsa/degree_distribution.hpp"
#include "crdsa/engine.hpp"
#include "crdsa/error.hpp"
#include "crdsa/figures.hpp"
#include "crdsa/metrics.hpp"
#include "crdsa/stability.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace crdsa;

namespace {

py::dict stats_dict(const RunStats &s) {
  py::dict d;
  d["G"] = s.offered_load;
  d["sent"] = s.packets_sent;
  d["decoded"] = s.packets_decoded;
  d["lost"] = s.packets_lost;
  d["measured_slots"] = s.measured_slots;
  d["plr"] = s.plr;
  d["throughput"] = s.throughput;
  d["mean_delay_slots"] = s.mean_delay_slots;
  return d;
}

py::dict row_dict(const SweepRow &r) {
  py::dict d = stats_dict(r.stats);
  d["scheme"] = scheme_name(r.scheme);
  d["dist"] = r.distribution;
  d["snr_db"] = r.snr_db;
  d["slots"] = r.slots;
  d["plr_ci_low"] = r.plr_ci_low;
  d["plr_ci_high"] = r.plr_ci_high;
  d["mean_degree"] = r.mean_degree;
  d["D"] = r.power_ratio;
  d["eta"] = r.eta;
  d["seed"] = r.seed;
  return d;
}

ExperimentConfig make_config(const std::string &scheme, const std::string &dist, int window,
                             int max_iterations, int memory_multiplier, std::vector<double> loads,
                             std::vector<double> snr_db, std::int64_t total_slots,
                             std::optional<std::int64_t> warmup_slots, std::uint64_t seed,
                             double confidence) {
  ExperimentConfig c;
  c.scheme = parse_scheme(scheme);
  c.distribution = parse_distribution(dist);
  c.window = window;
  c.max_iterations = max_iterations;
  c.memory_multiplier = memory_multiplier;
  c.loads = std::move(loads);
  c.snr_db = std::move(snr_db);
  c.total_slots = total_slots;
  c.warmup_slots = warmup_slots;
  c.seed = seed;
  c.confidence = confidence;
  return c;
}

SlotGrid grid_from(const std::vector<std::vector<SlotIndex>> &packets) {
  SlotIndex hi = 0;
  for (const auto &p : packets)
    for (SlotIndex s : p)
      hi = std::max(hi, s + 1);
  SlotGrid grid(0, hi);
  for (std::size_t i = 0; i < packets.size(); ++i) {
    auto slots = packets[i];
    std::sort(slots.begin(), slots.end());
    grid.add({static_cast<PacketId>(i), static_cast<int>(slots.size()), std::move(slots)});
  }
  return grid;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Slotted random access simulator with iterative interference cancellation";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const Error &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<DegreeDistribution>(m, "DegreeDistribution")
      .def(py::init([](const std::vector<std::pair<int, double>> &terms) {
             std::vector<DegreeTerm> t;
             for (const auto &[d, p] : terms)
               t.push_back({d, p});
             return DegreeDistribution(std::move(t));
           }),
           py::arg("terms"))
      .def_static("parse", &parse_distribution, py::arg("text"))
      .def_static("regular", &make_regular, py::arg("degree"))
      .def_static("irsa8", &irsa8_preset)
      .def_property_readonly("mean_degree", &DegreeDistribution::mean_degree)
      .def_property_readonly("max_degree", &DegreeDistribution::max_degree)
      .def_property_readonly("terms",
                             [](const DegreeDistribution &d) {
                               std::vector<std::pair<int, double>> out;
                               for (const auto &t : d.terms())
                                 out.emplace_back(t.degree, t.probability);
                               return out;
                             })
      .def_property_readonly("id", [](const DegreeDistribution &d) { return distribution_id(d); })
      .def("sample", &DegreeDistribution::sample, py::arg("u"))
      .def("__eq__", [](const DegreeDistribution &a, const DegreeDistribution &b) { return a == b; })
      .def("__repr__", [](const DegreeDistribution &d) {
        return "DegreeDistribution('" + d.to_string() + "')";
      });

  m.def("run_point",
        [](double load, const std::string &scheme, const std::string &dist, int window,
           int max_iterations, int memory_multiplier, std::int64_t total_slots,
           std::optional<std::int64_t> warmup_slots, std::uint64_t seed, double confidence) {
          const auto cfg = make_config(scheme, dist, window, max_iterations, memory_multiplier, {},
                                       {0.0}, total_slots, warmup_slots, seed, confidence);
          PointResult r;
          {
            py::gil_scoped_release release;
            r = run_point(cfg, load);
          }
          py::dict d = stats_dict(r.stats);
          d["plr_ci_low"] = r.plr_ci_low;
          d["plr_ci_high"] = r.plr_ci_high;
          d["seed"] = r.seed;
          d["peak_iterations"] = r.peak_iterations;
          return d;
        },
        py::arg("load"), py::arg("scheme") = "sw", py::arg("dist") = "x^2", py::arg("window") = 200,
        py::arg("max_iterations") = 50, py::arg("memory_multiplier") = 5,
        py::arg("total_slots") = 200000, py::arg("warmup_slots") = py::none(),
        py::arg("seed") = 1, py::arg("confidence") = 0.95,
        "Simulate one load point and return its statistics as a dict.");

  m.def("sweep",
        [](std::vector<double> loads, const std::string &scheme, const std::string &dist,
           std::vector<double> snr_db, int window, int max_iterations, int memory_multiplier,
           std::int64_t total_slots, std::optional<std::int64_t> warmup_slots, std::uint64_t seed,
           double confidence, unsigned threads) {
          const auto cfg = make_config(scheme, dist, window, max_iterations, memory_multiplier,
                                       std::move(loads), std::move(snr_db), total_slots,
                                       warmup_slots, seed, confidence);
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = sweep(cfg, threads);
          }
          py::list out;
          for (const auto &r : rows)
            out.append(row_dict(r));
          return out;
        },
        py::arg("loads"), py::arg("scheme") = "sw", py::arg("dist") = "x^2",
        py::arg("snr_db") = std::vector<double>{0.0}, py::arg("window") = 200,
        py::arg("max_iterations") = 50, py::arg("memory_multiplier") = 5,
        py::arg("total_slots") = 200000, py::arg("warmup_slots") = py::none(),
        py::arg("seed") = 1, py::arg("confidence") = 0.95, py::arg("threads") = 0,
        "Sweep a load grid; one dict per (G, SNR) with the CSV columns as keys.");

  m.def("sweep_csv",
        [](std::vector<double> loads, const std::string &scheme, const std::string &dist,
           std::vector<double> snr_db, std::int64_t total_slots, std::uint64_t seed,
           unsigned threads) {
          const auto cfg = make_config(scheme, dist, 200, 50, 5, std::move(loads),
                                       std::move(snr_db), total_slots, std::nullopt, seed, 0.95);
          py::gil_scoped_release release;
          return sweep_csv(sweep(cfg, threads));
        },
        py::arg("loads"), py::arg("scheme") = "sw", py::arg("dist") = "x^2",
        py::arg("snr_db") = std::vector<double>{0.0}, py::arg("total_slots") = 200000,
        py::arg("seed") = 1, py::arg("threads") = 0, "Sweep and render the result as CSV text.");

  m.def("peel",
        [](const std::vector<std::vector<SlotIndex>> &packets, int max_iterations) {
          SlotGrid grid = grid_from(packets);
          const auto out = peel(grid, max_iterations);
          return py::make_tuple(out.decoded, out.iterations);
        },
        py::arg("packets"), py::arg("max_iterations") = 50,
        "Peel packets given as lists of replica slots; returns (decoded indices, iterations).");
  m.def("oracle_peel",
        [](const std::vector<std::vector<SlotIndex>> &packets) {
          return oracle_peel(grid_from(packets));
        },
        py::arg("packets"));

  m.def("normalized_efficiency", &normalized_efficiency, py::arg("throughput"), py::arg("load"),
        py::arg("mean_degree"), py::arg("snr_linear"));
  m.def("snr_db_to_linear", &snr_db_to_linear, py::arg("snr_db"));
  m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("trials"),
        py::arg("confidence") = 0.95);

  m.def("find_equilibria",
        [](int population, double p_tx, double p_retx,
           const std::vector<std::pair<double, double>> &curve, int resolution) {
          const PopulationModel model{population, p_tx, p_retx};
          model.validate();
          const auto set = find_equilibria(model, ThroughputCurve(curve), resolution);
          py::list points;
          for (const auto &p : set.points) {
            py::dict d;
            d["n_b"] = p.n_b_star;
            d["g_tx"] = p.g_tx_star;
            d["throughput"] = p.throughput_star;
            d["kind"] = p.kind == EquilibriumKind::stable ? "stable" : "unstable";
            d["tangent"] = p.tangent;
            points.append(d);
          }
          return py::make_tuple(points, set.globally_stable);
        },
        py::arg("population"), py::arg("p_tx"), py::arg("p_retx"), py::arg("curve"),
        py::arg("resolution") = 10000,
        "Equilibria of the retransmission channel; returns (points, globally_stable).");

  m.def("make_figures",
        [](std::uint64_t seed, std::int64_t total_slots, unsigned threads) {
          FigureOptions o;
          o.seed = seed;
          o.total_slots = total_slots;
          o.threads = threads;
          std::vector<FigureFile> files;
          {
            py::gil_scoped_release release;
            files = make_figures(o);
          }
          py::dict out;
          for (const auto &f : files)
            out[py::str(f.name)] = f.contents;
          return out;
        },
        py::arg("seed") = 1, py::arg("total_slots") = 200000, py::arg("threads") = 0,
        "Figure CSVs keyed by file name.");

  m.def("parse_grid", &parse_grid, py::arg("text"));
  m.attr("SWEEP_HEADER") = std::string(kSweepHeader);
  m.attr("STABILITY_HEADER") = std::string(kStabilityHeader);
}
