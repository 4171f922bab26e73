#include "cli.hpp"

#include "crdsa/csv.hpp"
#include "crdsa/engine.hpp"
#include "crdsa/error.hpp"
#include "crdsa/figures.hpp"
#include "crdsa/stability.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace crdsa::cli {

namespace {

struct SweepFlags {
  std::vector<std::string> schemes{"sw"};
  std::vector<std::string> dists{"x^2"};
  std::string loads;
  std::vector<double> snr_db;
  std::int64_t slots = 200000;
  std::int64_t warmup = -1;
  int window = 200;
  int imax = 50;
  int memory_multiplier = 5;
  std::uint64_t seed = 1;
  double confidence = 0.95;
  unsigned threads = 0;
  std::string output;
  std::string trace;
};

struct StabilityFlags {
  std::string curve;
  int population = 0;
  double p_tx = 0.0;
  double p_retx = 0.0;
  std::string scheme;
  std::string dist;
  int resolution = 10000;
  int contour_points = 201;
  std::string output;
};

struct FigureFlags {
  std::string output_dir;
  std::uint64_t seed = 1;
  std::int64_t slots = 200000;
  int window = 200;
  int imax = 50;
  unsigned threads = 0;
};

void add_sweep_options(CLI::App *cmd, SweepFlags &f, const std::string &default_grid) {
  f.loads = default_grid;
  cmd->add_option("--scheme", f.schemes, "Access schemes: sa, fb, sw")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--dist", f.dists, "Degree distributions, e.g. \"x^2\" or irsa8")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--g", f.loads, "Load grid: start:stop:step or a comma list")
      ->capture_default_str();
  cmd->add_option("--snr-db", f.snr_db, "SNR values in dB")->delimiter(',');
  cmd->add_option("--slots", f.slots, "Simulated arrival slots per point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--warmup", f.warmup, "Warm-up slots (default 10 * window)");
  cmd->add_option("--window", f.window, "Frame size N_S / window N_sw")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--imax", f.imax, "Maximum IC iterations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--memory-multiplier", f.memory_multiplier,
                  "SW receiver memory in units of the window")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--confidence", f.confidence, "Confidence level of PLR intervals")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = auto)")->capture_default_str();
  cmd->add_option("-o,--output", f.output, "Output CSV (default stdout)");
  cmd->add_option("--trace", f.trace, "Write decoder events to this file");
}

std::vector<ExperimentConfig> build_configs(const SweepFlags &f) {
  std::vector<double> loads;
  std::vector<DegreeDistribution> dists;
  std::vector<Scheme> schemes;
  try {
    loads = parse_grid(f.loads);
    for (const auto &d : f.dists)
      dists.push_back(parse_distribution(d));
    for (const auto &s : f.schemes)
      schemes.push_back(parse_scheme(s));
  } catch (const Error &e) {
    throw CLI::ValidationError(e.what());
  }

  std::vector<ExperimentConfig> configs;
  for (Scheme s : schemes) {
    for (const auto &d : dists) {
      ExperimentConfig c;
      c.scheme = s;
      c.distribution = d;
      c.window = f.window;
      c.max_iterations = f.imax;
      c.memory_multiplier = f.memory_multiplier;
      c.loads = loads;
      c.snr_db = f.snr_db;
      c.total_slots = f.slots;
      if (f.warmup >= 0)
        c.warmup_slots = f.warmup;
      c.seed = f.seed;
      c.confidence = f.confidence;
      configs.push_back(std::move(c));
      if (s == Scheme::sa)
        break; // SA ignores the distribution
    }
  }
  return configs;
}

std::string join(const std::vector<std::string> &v) {
  std::string out;
  for (const auto &s : v)
    out += (out.empty() ? "" : ",") + s;
  return out;
}

void echo_config(std::ostream &err, const std::string &command,
                 const std::vector<ExperimentConfig> &configs) {
  const auto &c = configs.front();
  std::vector<std::string> series, loads, snrs;
  for (const auto &cfg : configs)
    series.push_back(scheme_name(cfg.scheme) + "(" + cfg.distribution_label() + ")");
  for (double g : c.loads)
    loads.push_back(format_number(g));
  for (double s : c.snr_db)
    snrs.push_back(format_number(s));
  err << "# simulate " << command << '\n'
      << "#   series: " << join(series) << '\n'
      << "#   G: " << join(loads) << '\n'
      << "#   snr_db: " << join(snrs) << '\n'
      << "#   window: " << c.window << "  imax: " << c.max_iterations
      << "  memory: " << c.buffer_capacity() << " slots\n"
      << "#   slots: " << c.total_slots << "  warmup: " << c.effective_warmup()
      << "  seed: " << c.seed << "  confidence: " << format_number(c.confidence) << '\n';
}

void emit(const std::string &path, const std::string &contents, std::ostream &out) {
  if (path.empty() || path == "-")
    out << contents;
  else
    write_file_atomic(path, contents);
}

int run_sweep(const std::string &command, SweepFlags f, std::ostream &out, std::ostream &err) {
  if (f.snr_db.empty())
    f.snr_db = command == "efficiency" ? std::vector<double>{0, 6, 12, 18} : std::vector<double>{0};
  const auto configs = build_configs(f);
  for (const auto &c : configs)
    c.validate();
  echo_config(err, command, configs);

  std::unique_ptr<std::ofstream> trace_file;
  TraceFactory factory;
  if (!f.trace.empty()) {
    trace_file = std::make_unique<std::ofstream>(f.trace);
    if (!*trace_file)
      throw input_error("cannot open trace file '" + f.trace + "'");
    *trace_file << "scheme,dist,G,slot,packet_id,event,iteration\n";
    factory = [&trace_file](const ExperimentConfig &cfg, double load) -> TraceSink {
      const std::string prefix =
          scheme_name(cfg.scheme) + ',' + cfg.distribution_label() + ',' + format_number(load) + ',';
      return [prefix, os = trace_file.get()](const DecoderEvent &e) {
        *os << prefix << e.slot << ',' << e.packet << ','
            << (e.kind == EventKind::decoded ? "decoded" : "lost") << ',' << e.iteration << '\n';
      };
    };
  }

  const auto rows = sweep(configs, f.threads, factory);
  emit(f.output, sweep_csv(rows), out);
  return kSuccess;
}

int run_stability(const StabilityFlags &f, std::ostream &out, std::ostream &err) {
  PopulationModel model{f.population, f.p_tx, f.p_retx};
  try {
    model.validate();
  } catch (const Error &e) {
    throw CLI::ValidationError(e.what());
  }
  CurveSelection selection;
  if (!f.scheme.empty())
    selection.scheme = f.scheme;
  if (!f.dist.empty())
    selection.distribution = f.dist;
  const ThroughputCurve curve = read_throughput_curve(std::filesystem::path(f.curve), selection);

  err << "# simulate stability\n"
      << "#   curve: " << f.curve << " (" << curve.samples().size() << " points, G in ["
      << format_number(curve.min_load()) << ", " << format_number(curve.max_load()) << "])\n"
      << "#   population: " << model.population << "  p_tx: " << format_number(model.p_tx)
      << "  p_retx: " << format_number(model.p_retx) << '\n'
      << "#   resolution: " << f.resolution << "  contour points: " << f.contour_points << '\n';

  const EquilibriumSet eq = find_equilibria(model, curve, f.resolution);
  const auto contour = equilibrium_contour(model, curve, f.contour_points);
  for (const auto &p : eq.points) {
    err << "#   equilibrium n_b=" << format_number(p.n_b_star)
        << " G=" << format_number(offered_loads(model, p.n_b_star).g_total) << ' '
        << (p.kind == EquilibriumKind::stable ? "stable" : "unstable")
        << (p.tangent ? " (tangent)" : "") << '\n';
  }
  err << "#   globally stable: " << (eq.globally_stable ? "yes" : "no") << '\n';

  std::ostringstream os;
  write_stability_csv(os, contour, eq, model);
  emit(f.output, os.str(), out);
  return kSuccess;
}

int run_figures(FigureFlags f, std::ostream &err) {
  if (f.output_dir.empty()) {
    const char *env = std::getenv("CRDSA_OUTPUT_DIR");
    f.output_dir = env && *env ? env : "results";
  }
  FigureOptions options;
  options.seed = f.seed;
  options.total_slots = f.slots;
  options.window = f.window;
  options.max_iterations = f.imax;
  options.threads = f.threads;

  const auto configs = figure_sweep_configs(options);
  echo_config(err, "figures", configs);
  err << "#   output: " << f.output_dir << '\n';

  std::error_code ec;
  std::filesystem::create_directories(f.output_dir, ec);
  if (ec)
    throw input_error("cannot create output directory '" + f.output_dir + "'");
  for (const auto &file : make_figures(options)) {
    write_file_atomic(std::filesystem::path(f.output_dir) / file.name, file.contents);
    err << "#   wrote " << file.name << '\n';
  }
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Monte Carlo simulator for slotted random access with interference cancellation",
               "simulate"};
  app.require_subcommand(1);

  SweepFlags thr, plr, eff;
  add_sweep_options(app.add_subcommand("throughput", "Throughput T(G) sweep"), thr,
                    "0.1:1.2:0.05");
  add_sweep_options(app.add_subcommand("plr", "Packet loss ratio sweep"), plr, "0.1:0.8:0.05");
  add_sweep_options(app.add_subcommand("efficiency", "Normalized efficiency sweep"), eff,
                    "0.1:1.2:0.05");

  StabilityFlags stab;
  auto *s = app.add_subcommand("stability", "Equilibria of the retransmission channel");
  s->add_option("--curve", stab.curve, "Throughput CSV from a sweep")->required();
  s->add_option("--population", stab.population, "Number of users M")->required();
  s->add_option("--p-tx", stab.p_tx, "New transmission probability per slot")->required();
  s->add_option("--p-retx", stab.p_retx, "Retransmission probability per slot")->required();
  s->add_option("--scheme", stab.scheme, "Select the curve's scheme");
  s->add_option("--dist", stab.dist, "Select the curve's distribution");
  s->add_option("--resolution", stab.resolution, "Backlog scan intervals")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--contour-points", stab.contour_points, "Contour rows")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  s->add_option("-o,--output", stab.output, "Output CSV (default stdout)");

  FigureFlags fig;
  auto *f = app.add_subcommand("figures", "Run the canned figure reproductions");
  f->add_option("-o,--output", fig.output_dir,
                "Output directory (default $CRDSA_OUTPUT_DIR or ./results)");
  f->add_option("--seed", fig.seed, "Master seed")->capture_default_str();
  f->add_option("--slots", fig.slots, "Arrival slots per point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  f->add_option("--window", fig.window, "Frame / window size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  f->add_option("--imax", fig.imax, "Maximum IC iterations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  f->add_option("--threads", fig.threads, "Worker threads (0 = auto)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    const auto *cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "throughput")
      return run_sweep(name, thr, out, err);
    if (name == "plr")
      return run_sweep(name, plr, out, err);
    if (name == "efficiency")
      return run_sweep(name, eff, out, err);
    if (name == "stability")
      return run_stability(stab, out, err);
    return run_figures(fig, err);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
    case ErrorKind::input:
      return kBadInput;
    default:
      return kInfeasible;
    }
  }
}

} // namespace crdsa::cli
