#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowmach/cli.hpp"
#include "lowmach/errors.hpp"

using namespace lowmach;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("lowmach_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << body;
  return p;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "lowmach");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured run_binary(const std::string& args) {
  Captured c;
  const std::string cmd = std::string(LOWMACH_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 256> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) c.out += buf.data();
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config("# comment\nn = 16\nmu = 1.5\neps_list = 0.1, 0.05,0.025\nforcing = kolmogorov\n"
                                   "forcing_k = 2\ntiming = true\n");
  CHECK(c.n == 16);
  CHECK(c.mu == 1.5);
  CHECK(c.eps_list == std::vector<double>{0.1, 0.05, 0.025});
  CHECK(c.forcing == "kolmogorov");
  CHECK(c.timing);
  CHECK(c.lambda == 0.0);

  CHECK_THROWS_AS(parse_config("bogus = 1\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("mu = 1\nmu = 2\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("mu = abc\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("mu\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("mu = -1\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("eps = 1\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("lambda = -1.5\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("dealias_fraction = 0\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("n = 7\n"), InvalidParameter);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.n = 24;
  c.mu = 0.7;
  c.lambda = 0.1 / 3.0;
  c.eps = 0.03;
  c.eps_list = {0.2, 0.1 / 3.0};
  c.forcing = "modes";
  c.forcing_modes = {{'f', 0, 1, 2, 0.25, -0.5}, {'f', 0, -1, -2, 0.25, 0.5}, {'g', 1, 0, 0, 0.125, 0.0}};
  c.seed = 99;
  c.timing = true;
  c.out = "somewhere";
  const RunConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("forcing modes must be Hermitian") {
  CHECK_NOTHROW(parse_config("forcing = modes\nforcing_modes = f:x:1:0:0.5:0.5, f:x:-1:0:0.5:-0.5\n"));
  CHECK_THROWS_AS(parse_config("forcing = modes\nforcing_modes = f:x:1:0:0.5:0.5\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("forcing = modes\nforcing_modes = f:x:1:0:0.5:0.5, f:x:-1:0:0.5:0.5\n"),
                  InvalidParameter);
  CHECK_THROWS_AS(parse_config("forcing = modes\nforcing_modes = g:y:0:0:1:1\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("forcing = modes\nforcing_modes = f:x:16:0:1:0, f:x:-16:0:1:0\n"), InvalidParameter);
  CHECK_THROWS_AS(parse_config("forcing = modes\nforcing_modes = h:x:1:0:1:0\n"), InvalidParameter);

  const RunConfig c = parse_config("forcing = modes\nforcing_modes = f:y:2:1:0.5:0.25, f:y:-2:-1:0.5:-0.25\n");
  const auto [f, g] = c.forcing_fields(c.grid());
  CHECK(sobolev_norm(g, 0) == 0.0);
  CHECK(sobolev_norm(f[0], 0) == 0.0);
  // a real field with |c|^2 = 0.3125 at two conjugate modes
  CHECK(sobolev_norm(f[1], 0) == doctest::Approx(std::sqrt(2 * 0.3125)).epsilon(1e-14));
}

TEST_CASE("overrides") {
  CliOptions o;
  o.out = "elsewhere";
  o.workers = 3;
  o.seed = 7;
  const RunConfig c = apply_overrides(RunConfig{}, o);
  CHECK(c.out == "elsewhere");
  CHECK(c.workers == 3);
  CHECK(c.seed == 7);
  o.workers = 0;
  CHECK_THROWS_AS(apply_overrides(RunConfig{}, o), InvalidParameter);
}

TEST_CASE("solve with zero forcing") {
  TempDir d("solve_zero");
  const fs::path cfg = write_config(d.path, "forcing = zero\ntrials = 2\nout = " + (d.path / "out").string() + "\n");
  CHECK(run({"solve", "--config", cfg.string()}) == kExitOk);
  const auto j = read_json(d.path / "out" / "report.json");
  CHECK(j["converged"] == true);
  CHECK(j["final_norm"] == 0.0);
}

TEST_CASE("exit codes") {
  TempDir d("exit_codes");
  const std::string out = "out = " + (d.path / "out").string() + "\n";

  CHECK(run({"solve", "--config", write_config(d.path, "mu = -1\n" + out).string()}) == kExitConfig);
  CHECK(run({"check", "--config", write_config(d.path, "trials = 0\n" + out).string()}) == kExitConfig);
  CHECK(run({"sweep", "--config", write_config(d.path, "eps_list = 0.5, 0.25\n" + out).string()}) == kExitConfig);
  CHECK(run({"solve", "--config", (d.path / "missing.cfg").string()}) == kExitConfig);
  CHECK(run({"solve"}) == kExitConfig);
  CHECK(run({"frobnicate", "--config", "x"}) == kExitConfig);

  // The alias-free product check is the one property that needs 2/3 dealiasing.
  const fs::path full = write_config(d.path, "dealias_fraction = 1.0\ntrials = 2\n" + out);
  CHECK(run({"check", "--config", full.string()}) == kExitFailure);
  const auto j = read_json(d.path / "out" / "report.json");
  int failed = 0;
  for (const auto& r : j["results"])
    if (!r["passed"].get<bool>()) {
      ++failed;
      CHECK(r["name"] == "dealiased product is alias-free");
    }
  CHECK(failed == 1);
}

TEST_CASE("gated solve succeeds with --force") {
  TempDir d("force");
  const fs::path cfg =
      write_config(d.path, "eps = 0.5\nmax_outer = 2\ntrials = 2\nout = " + (d.path / "out").string() + "\n");
  CHECK(run({"solve", "--config", cfg.string()}) == kExitConfig);
  const int forced = run({"solve", "--config", cfg.string(), "--force"});
  CHECK(forced != kExitConfig);
  CHECK(fs::exists(d.path / "out" / "report.json"));
}

TEST_CASE("mms cases") {
  TempDir d("mms");
  for (const char* name : {"taylor_green", "gradient_force", "stokes_shear"}) {
    const fs::path cfg =
        write_config(d.path, std::string("mms_case = ") + name + "\nout = " + (d.path / "out").string() + "\n");
    CHECK(run({"mms", "--config", cfg.string()}) == kExitOk);
    CHECK(read_json(d.path / "out" / "report.json")["passed"] == true);
  }
}

TEST_CASE("binary prints one summary line") {
  TempDir d("binary");
  const fs::path cfg = write_config(d.path, "trials = 2\nout = " + (d.path / "out").string() + "\n");
  const Captured solve = run_binary("solve --config " + cfg.string());
  CHECK(solve.code == 0);
  CHECK(std::count(solve.out.begin(), solve.out.end(), '\n') == 1);
  CHECK(solve.out.rfind("solve: converged", 0) == 0);

  const fs::path bad = write_config(d.path, "mu = -1\n");
  const Captured err = run_binary("solve --config " + bad.string());
  CHECK(err.code == 2);
  CHECK(err.out.empty());
}

TEST_CASE("sweep output files") {
  TempDir d("sweep");
  const fs::path cfg = write_config(
      d.path, "eps_list = 0.1, 0.05, 0.025\nworkers = 3\ntrials = 2\nout = " + (d.path / "out").string() + "\n");
  CHECK(run({"sweep", "--config", cfg.string()}) == kExitOk);
  std::ifstream csv(d.path / "out" / "sweep.csv");
  std::stringstream first;
  first << csv.rdbuf();
  CHECK(run({"sweep", "--config", cfg.string(), "--workers", "1"}) == kExitOk);
  std::ifstream csv2(d.path / "out" / "sweep.csv");
  std::stringstream second;
  second << csv2.rdbuf();
  CHECK(first.str() == second.str());
  const auto j = read_json(d.path / "out" / "report.json");
  CHECK(j["rows"].size() == 3);
  CHECK(j.contains("fits"));
  CHECK(j.contains("checks"));
}

TEST_CASE("state save and load") {
  TempDir d("state");
  const fs::path cfg = write_config(d.path, "trials = 2\nout = " + (d.path / "out").string() + "\n");
  const std::string state = (d.path / "state.bin").string();
  CHECK(run({"solve", "--config", cfg.string(), "--save", state}) == kExitOk);
  CHECK(fs::exists(state));
  CHECK(run({"solve", "--config", cfg.string(), "--load", state}) == kExitOk);
  const auto j = read_json(d.path / "out" / "report.json");
  CHECK(j["outer_iters"].get<int>() <= 2);

  const fs::path other = write_config(d.path, "n = 16\ntrials = 2\nout = " + (d.path / "out").string() + "\n");
  CHECK(run({"solve", "--config", other.string(), "--load", state}) == kExitConfig);
  std::ofstream(d.path / "junk.bin") << "not a snapshot";
  CHECK(run({"solve", "--config", cfg.string(), "--load", (d.path / "junk.bin").string()}) != kExitOk);
}
