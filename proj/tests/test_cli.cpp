#include "cli.hpp"
#include "crdsa/csv.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result simulate(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = crdsa::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    out.push_back(l);
  return out;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("efficiency sweep writes a CSV with an eta column") {
  TempDir dir("crdsa_cli_eff");
  const auto file = (dir.path / "out.csv").string();
  const auto r = simulate({"efficiency", "--scheme", "sw", "--dist", "x^2", "--snr-db", "0", "--g",
                           "0.1:1.2:0.05", "--seed", "7", "--slots", "5000", "-o", file});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.find("# simulate efficiency") != std::string::npos);
  const auto rows = lines(slurp(file));
  REQUIRE(rows.size() == 24);
  CHECK(rows[0] == crdsa::kSweepHeader);
  CHECK(rows[1].rfind("SW,x^2,0.1,0,5000,", 0) == 0);
  CHECK(rows[23].rfind("SW,x^2,1.2,0,", 0) == 0);
}

TEST_CASE("seed determines the rows") {
  const std::vector<std::string> args = {"throughput", "--scheme", "fb,sw", "--g", "0.4,0.8",
                                         "--slots", "5000", "--seed", "3"};
  const auto a = simulate(args);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  const auto b = simulate(threaded);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 5);
}

TEST_CASE("stability consumes the throughput CSV unchanged") {
  TempDir dir("crdsa_cli_stab");
  const auto curve = (dir.path / "thr.csv").string();
  REQUIRE(simulate({"throughput", "--scheme", "sw", "--g", "0.1:10:0.1", "--slots", "20000", "-o",
                    curve})
              .code == 0);
  const auto r = simulate({"stability", "--curve", curve, "--population", "1000", "--p-tx",
                           "0.0005", "--p-retx", "0.01"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 201);
  CHECK(rows[0] == crdsa::kStabilityHeader);
  bool has_equilibrium = false;
  for (std::size_t i = 202; i < rows.size(); ++i)
    has_equilibrium |= rows[i].find(",stable,") != std::string::npos ||
                       rows[i].find(",unstable,") != std::string::npos;
  CHECK(has_equilibrium);

  SUBCASE("a curve that stops short is infeasible") {
    const auto short_curve = (dir.path / "short.csv").string();
    REQUIRE(simulate({"throughput", "--scheme", "sw", "--g", "0.1:1:0.1", "--slots", "5000", "-o",
                      short_curve})
                .code == 0);
    CHECK(simulate({"stability", "--curve", short_curve, "--population", "1000", "--p-tx",
                    "0.0005", "--p-retx", "0.01"})
              .code == 3);
  }
}

TEST_CASE("figures are written and reproducible") {
  TempDir dir("crdsa_cli_fig");
  const auto a = (dir.path / "a").string();
  const auto b = (dir.path / "b").string();
  REQUIRE(simulate({"figures", "-o", a, "--slots", "4000"}).code == 0);
  REQUIRE(simulate({"figures", "-o", b, "--slots", "4000", "--threads", "1"}).code == 0);
  for (int k = 2; k <= 7; ++k) {
    const std::string name = "fig" + std::to_string(k) + ".csv";
    REQUIRE(fs::exists(fs::path(a) / name));
    CHECK(slurp(fs::path(a) / name) == slurp(fs::path(b) / name));
  }
  CHECK(std::distance(fs::directory_iterator(a), fs::directory_iterator{}) == 6);
}

TEST_CASE("exit codes") {
  CHECK(simulate({"--help"}).code == 0);
  CHECK(simulate({"throughput", "--help"}).code == 0);
  CHECK(simulate({}).code == 2);
  CHECK(simulate({"bogus"}).code == 2);
  CHECK(simulate({"throughput", "--no-such-flag"}).code == 2);
  CHECK(simulate({"throughput", "--g", "a:b"}).code == 2);
  CHECK(simulate({"throughput", "--dist", "y^2"}).code == 2);
  CHECK(simulate({"stability", "--curve", "x.csv"}).code == 2);
  // degree 3 cannot fit in a 2-slot frame
  CHECK(simulate({"throughput", "--scheme", "fb", "--dist", "x^3", "--window", "2", "--slots",
                  "1000", "--warmup", "0"})
            .code == 3);
  CHECK(simulate({"stability", "--curve", "/nonexistent/thr.csv", "--population", "10", "--p-tx",
                  "0.01", "--p-retx", "0.1"})
            .code == 4);

  TempDir dir("crdsa_cli_bad");
  const auto bad = (dir.path / "bad.csv").string();
  std::ofstream(bad) << "scheme,dist,G\nSW,x^2,0.5\n";
  CHECK(simulate({"stability", "--curve", bad, "--population", "10", "--p-tx", "0.01",
                  "--p-retx", "0.1"})
            .code == 4);
}
