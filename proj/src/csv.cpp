#include "crdsa/csv.hpp"

#include "crdsa/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace crdsa {

std::string format_number(double value) {
  if (std::isnan(value))
    return "nan";
  if (value == 0.0)
    return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  if (ec != std::errc())
    throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
  out << kSweepHeader << '\n';
  for (const auto &r : rows) {
    out << scheme_name(r.scheme) << ',' << r.distribution << ',' << format_number(r.load) << ','
        << format_number(r.snr_db) << ',' << r.slots << ',' << r.stats.packets_sent << ','
        << r.stats.packets_decoded << ',' << r.stats.packets_lost << ','
        << format_number(r.stats.plr) << ',' << format_number(r.plr_ci_low) << ','
        << format_number(r.plr_ci_high) << ',' << format_number(r.stats.throughput) << ','
        << format_number(r.mean_degree) << ',' << format_number(r.power_ratio) << ','
        << format_number(r.eta) << ',' << format_number(r.stats.mean_delay_slots) << ','
        << r.seed << '\n';
  }
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
  std::ostringstream os;
  write_sweep_csv(os, rows);
  return os.str();
}

void write_stability_csv(std::ostream &out, const std::vector<ContourRow> &contour,
                         const EquilibriumSet &equilibria, const PopulationModel &model) {
  const char *global = equilibria.globally_stable ? "true" : "false";
  out << kStabilityHeader << '\n';
  auto row = [&](double n_b, const OfferedLoads &l, double t, std::string_view kind) {
    out << format_number(n_b) << ',' << format_number(l.g_tx) << ',' << format_number(l.g_retx)
        << ',' << format_number(l.g_total) << ',' << format_number(t) << ',' << kind << ','
        << global << '\n';
  };
  for (const auto &c : contour)
    row(c.n_b, c.loads, c.throughput, "curve");
  for (const auto &p : equilibria.points)
    row(p.n_b_star, offered_loads(model, p.n_b_star), p.throughput_star,
        p.kind == EquilibriumKind::stable ? "stable" : "unstable");
}

// --- reading ----------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
    cells.push_back(cell);
  if (!line.empty() && line.back() == ',')
    cells.emplace_back();
  return cells;
}

double parse_double(const std::string &s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw input_error("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  return v;
}

std::string normalize_dist(const std::string &s) {
  try {
    return distribution_id(parse_distribution(s));
  } catch (const Error &) {
    return s;
  }
}

} // namespace

ThroughputCurve read_throughput_curve(std::istream &in, const CurveSelection &selection) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    header = split(line);
    break;
  }
  if (header.empty())
    throw input_error("empty throughput CSV");

  auto column = [&](std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw input_error("throughput CSV lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_scheme = column("scheme");
  const std::size_t c_dist = column("dist");
  const std::size_t c_load = column("G");
  const std::size_t c_thr = column("throughput");

  const std::optional<std::string> want_dist =
      selection.distribution ? std::optional(normalize_dist(*selection.distribution)) : std::nullopt;
  std::optional<std::string> want_scheme;
  if (selection.scheme)
    want_scheme = scheme_name(parse_scheme(*selection.scheme));

  std::map<double, double> points;
  std::optional<std::pair<std::string, std::string>> series;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw input_error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, got " +
                        std::to_string(cells.size()));
    const std::string scheme = cells[c_scheme];
    const std::string dist = normalize_dist(cells[c_dist]);
    if (want_scheme && scheme != *want_scheme)
      continue;
    if (want_dist && dist != *want_dist)
      continue;
    if (series && (series->first != scheme || series->second != dist))
      throw input_error("throughput CSV holds several series (" + series->first + "/" +
                        series->second + " and " + scheme + "/" + dist +
                        "); select one with --scheme/--dist");
    series = {scheme, dist};

    const double g = parse_double(cells[c_load], line_no);
    const double t = parse_double(cells[c_thr], line_no);
    auto [it, inserted] = points.emplace(g, t);
    if (!inserted && it->second != t)
      throw input_error("line " + std::to_string(line_no) + ": conflicting throughput for G=" +
                        cells[c_load]);
  }
  if (points.empty())
    throw input_error("no throughput rows match the selection");

  try {
    return ThroughputCurve({points.begin(), points.end()});
  } catch (const Error &e) {
    throw input_error(e.what());
  }
}

ThroughputCurve read_throughput_curve(const std::filesystem::path &path,
                                      const CurveSelection &selection) {
  std::ifstream in(path);
  if (!in)
    throw input_error("cannot open '" + path.string() + "'");
  return read_throughput_curve(in, selection);
}

void write_file_atomic(const std::filesystem::path &path, std::string_view contents) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw input_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
      throw input_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw input_error("cannot move output into place at '" + path.string() + "'");
  }
}

} // namespace crdsa
