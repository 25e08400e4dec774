// Drives the installed command-line binary and inspects its files.

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cqft/cli.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cqft_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto out = scratch() / ("stdout_" + std::to_string(counter));
  const auto err = scratch() / ("stderr_" + std::to_string(counter++));
  const std::string cmd = std::string(CQFT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

std::vector<double> split_numbers(const std::string& row) {
  std::vector<double> v;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

}  // namespace

TEST_CASE("hash and number formatting helpers", "[cli]") {
  // Reference FNV-1a 64 values.
  CHECK(cqft::cli::fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(cqft::cli::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(cqft::cli::hex64(0xabcull) == "0000000000000abc");
  CHECK(cqft::cli::num(0.1) == "0.10000000000000001");
  CHECK(cqft::cli::exit_code(cqft::ErrorCategory::ResourceCap) == 3);
}

TEST_CASE("dispersion table", "[cli]") {
  const auto path = scratch() / "disp.csv";
  const auto r = run_cli("dispersion --a 0.1 --m 1 --L 256 --out " + path.string());
  REQUIRE(r.code == 0);
  const auto ls = lines(slurp(path));
  REQUIRE(ls.size() == 258);
  CHECK(ls[0].rfind("# config_hash=", 0) == 0);
  CHECK(ls[0].find("\"subcommand\":\"dispersion\"") != std::string::npos);
  CHECK(ls[1] == "p,theta,omega,E,E_latt");
  const auto first = split_numbers(ls[2]), last = split_numbers(ls.back());
  CHECK(first[0] == 0.0);
  CHECK(last[0] == Catch::Approx(cqft::pi / 0.1).epsilon(1e-15));
  for (std::size_t i = 2; i < ls.size(); ++i) CHECK(split_numbers(ls[i]).size() == 5);
}

TEST_CASE("one-loop table layout", "[cli]") {
  const auto r = run_cli("oneloop --lambda 1 --m 1 --a-series 0.2,0.1,0.05,0.025");
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls[1] == "a,pi_cont,pi_shift_plain,pi_shift_smeared,pi_cont_norm,pi_shift_plain_norm,pi_shift_smeared_norm");
  const auto top = split_numbers(ls[2]);
  CHECK(top[0] == 0.2);
  CHECK(top[4] == 0.0);
  CHECK(top[5] == 0.0);
  CHECK(top[6] == 0.0);
  for (int i = 3; i < 6; ++i) {
    const auto row = split_numbers(ls[i]);
    CHECK(row[4] == Catch::Approx(row[1] - top[1]).epsilon(1e-14));
    CHECK(row[5] > 0.0);
  }
}

TEST_CASE("JSON reports", "[cli]") {
  SECTION("pathint-check") {
    const auto r = run_cli("pathint-check --L 2 --n-points 16 --tau 2");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const char* key : {"config_hash", "config", "kind", "L", "n_points", "tau", "circuit_amp", "path_amp",
                            "action_amp", "rel_errors"})
      CHECK(j.contains(key));
    CHECK(j["rel_errors"]["path"].get<double>() < 1e-12);
    CHECK(j["rel_errors"]["action"].get<double>() < 1e-12);
  }
  SECTION("gauge-check") {
    const auto r = run_cli("gauge-check --N 2 --tau 1");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const char* key : {"N", "lattice", "g", "kappa", "tau", "lhs", "rhs", "deviation", "wel_unitarity_deviation",
                            "gauss_commutator_max"})
      CHECK(j.contains(key));
    CHECK(j["deviation"].get<double>() < 1e-10);
  }
  SECTION("movers") {
    const auto r = run_cli("movers --L 8");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["residual"].get<double>() < 1e-12);
  }
  SECTION("renorm") {
    const auto r = run_cli(std::string("renorm --problem ") + CQFT_SAMPLES_DIR + "/renorm_problem.json");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["converged"].get<bool>());
    CHECK(std::abs(j["params"][0].get<double>() - 1.0) < 1e-3);
    CHECK(j["trace"].size() == j["iterations"].get<std::size_t>() + 1);
  }
}

TEST_CASE("lightcone and propagator tables", "[cli]") {
  const auto lc = run_cli("lightcone --tau-max 5");
  REQUIRE(lc.code == 0);
  const auto ls = lines(lc.out);
  REQUIRE(ls.size() == 8);
  for (int t = 0; t <= 5; ++t) {
    const auto row = split_numbers(ls[2 + t]);
    CHECK(row[1] <= 2 * t);
    CHECK(row[2] <= 2 * t);
  }
  const auto pr = run_cli("propagator --n-p0 8 --n-p 4");
  REQUIRE(pr.code == 0);
  const auto pl = lines(pr.out);
  CHECK(pl[1] == "p0,p1,re,im");
  CHECK(pl.size() == 2 + 32);
}

TEST_CASE("config files and flag precedence", "[cli]") {
  const auto cfg = scratch() / "disp.json";
  write_file(cfg, R"({"a": 0.2, "m": 0.5, "L": 7})");
  const auto from_file = run_cli("dispersion --config " + cfg.string());
  const auto from_flags = run_cli("dispersion --a 0.2 --m 0.5 --L 7");
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == from_flags.out);
  CHECK(lines(from_file.out).size() == 9);

  const auto overridden = run_cli("dispersion --config " + cfg.string() + " --L 4");
  REQUIRE(overridden.code == 0);
  CHECK(lines(overridden.out).size() == 6);
  CHECK(lines(overridden.out)[0] != lines(from_file.out)[0]);

  // The echoed config can be fed back in.
  const auto header = lines(from_file.out)[0];
  const auto echoed = scratch() / "echo.json";
  write_file(echoed, header.substr(header.find("config=") + 7));
  CHECK(run_cli("dispersion --config " + echoed.string()).out == from_file.out);

  write_file(cfg, R"({"a": 0.2, "bogus": 1})");
  CHECK(run_cli("dispersion --config " + cfg.string()).code == 1);
  write_file(cfg, R"({"a": "wide"})");
  CHECK(run_cli("dispersion --config " + cfg.string()).code == 1);
  write_file(cfg, "{not json");
  CHECK(run_cli("dispersion --config " + cfg.string()).code == 1);
  CHECK(run_cli("dispersion --config " + (scratch() / "missing.json").string()).code == 1);
}

TEST_CASE("exit codes", "[cli]") {
  const auto unknown = run_cli("frobnicate");
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run_cli("").code == 1);
  CHECK(run_cli("dispersion --a -1").code == 1);
  CHECK(run_cli("dispersion --no-such-flag 3").code == 1);
  CHECK(run_cli("pathint-check --kind euler").code == 1);
  CHECK(run_cli("gauge-check --Lx 1 --Ly 1 --N 0").code == 1);

  // Resource caps.
  CHECK(run_cli("pathint-check --n-points 64 --tau 4").code == 3);
  CHECK(run_cli("pathint-check --L 5 --n-points 32").code == 3);
  CHECK(run_cli("gauge-check --N 2 --tau 4").code == 3);

  // Convergence failure.
  const auto prob = scratch() / "diverge.json";
  write_file(prob, R"({"lattice": {"a": 0.1}, "observables": ["one_loop_plain"], "planted": {"lambda": 10000},
                       "init": {"lambda": 10001}, "eta": 10, "backtrack": false})");
  CHECK(run_cli("renorm --problem " + prob.string()).code == 2);

  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("identical configs give byte-identical files", "[cli]") {
  for (const std::string& args : std::vector<std::string>{"dispersion --L 64", "oneloop --a-series 0.2,0.1,0.05,0.025", "pathint-check", "gauge-check", "movers",
        "lightcone", "propagator --n-p0 16 --n-p 16",
        std::string("renorm --problem ") + CQFT_SAMPLES_DIR + "/renorm_problem.json"}) {
    const auto a = scratch() / "det_a", b = scratch() / "det_b";
    REQUIRE(run_cli(args + " --out " + a.string()).code == 0);
    REQUIRE(run_cli(args + " --out " + b.string()).code == 0);
    const auto ta = slurp(a), tb = slurp(b);
    CHECK(!ta.empty());
    CHECK(ta == tb);
    CHECK(ta.find('\r') == std::string::npos);
  }
}
