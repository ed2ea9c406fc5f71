#include "lowmach/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lowmach/errors.hpp"
#include "lowmach/report.hpp"

namespace lowmach {

namespace fs = std::filesystem;

namespace {

fs::path out_dir(const RunConfig& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream o(path);
  if (!o) throw InvalidParameter("cannot write '" + path.string() + "'");
  o << j.dump(2) << '\n';
}

}  // namespace

RunConfig apply_overrides(RunConfig c, const CliOptions& opts) {
  if (opts.out) c.out = *opts.out;
  if (opts.workers) c.workers = *opts.workers;
  if (opts.seed) c.seed = *opts.seed;
  c.validate();
  return c;
}

int cmd_solve(const RunConfig& c, const CliOptions& opts) {
  const Grid grid = c.grid();
  const auto [f, g] = c.forcing_fields(grid);
  SplitState initial;
  const SplitState* init = nullptr;
  if (!opts.load.empty()) {
    initial = load_state(opts.load);
    if (!(initial.U.grid() == grid)) throw InvalidParameter("solve: loaded state grid differs from config grid");
    init = &initial;
  }
  const SolveReport r = fixed_point_solve(f, g, c.params(), c.solver_options(opts.force), init);
  const fs::path dir = out_dir(c);
  write_json(dir / "report.json", solve_report_json(r, c));
  if (!opts.save.empty()) save_state(opts.save, r.state);
  std::printf("solve: %s eps=%g outer_iters=%d residual=%.3e\n", r.converged ? "converged" : "FAILED", c.eps,
              r.outer_iters, r.residual_transformed);
  return r.converged ? kExitOk : kExitFailure;
}

int cmd_sweep(const RunConfig& c, const CliOptions& opts) {
  const Grid grid = c.grid();
  const auto [f, g] = c.forcing_fields(grid);
  SweepOptions so;
  so.solver = c.solver_options(opts.force);
  so.workers = c.workers;
  const SweepTable t = epsilon_sweep(f, g, c.params(), c.eps_list, so);
  const auto checks = sweep_invariants(t);
  const fs::path dir = out_dir(c);
  {
    std::ofstream csv(dir / "sweep.csv");
    write_sweep_csv(t, csv, c.timing);
  }
  write_json(dir / "report.json", sweep_report_json(t, checks, c));
  int failed = 0;
  for (const auto& k : checks) failed += k.passed ? 0 : 1;
  std::printf("sweep: %zu rows, %d failed checks\n", t.rows.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_mms(const RunConfig& c, const CliOptions&) {
  PicardOptions po;
  po.max_iter = c.max_inner;
  const MmsResult m = run_mms(c.mms_case, c.grid(), c.mu, po);
  write_json(out_dir(c) / "report.json", mms_report_json(m, c));
  std::printf("mms %s: %s U error %.3e\n", m.name.c_str(), m.passed ? "passed" : "FAILED", m.rows[0].value);
  return m.passed ? kExitOk : kExitFailure;
}

int cmd_check(const RunConfig& c, const CliOptions&) {
  const auto results = run_checks(c);
  write_json(out_dir(c) / "report.json", check_report_json(results, c));
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) {
      ++failed;
      std::cerr << "FAILED " << r.module << ": " << r.name << " (" << r.detail << ")\n";
    }
  std::printf("check: %zu properties, %d failed\n", results.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Steady low-Mach compressible Navier-Stokes solver on the periodic square"};
  app.require_subcommand(1);
  std::string config_path;
  CliOptions opts;
  std::string out;
  int workers = 0;
  unsigned long long seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--force", opts.force, "bypass smallness gates");
    sub->add_option("--workers", workers, "concurrent sweep workers")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized probes");
  };
  CLI::App* solve = app.add_subcommand("solve", "fixed-point solve at one eps");
  add_common(solve);
  solve->add_option("--save", opts.save, "write the final state snapshot");
  solve->add_option("--load", opts.load, "start from a state snapshot");
  CLI::App* sweep = app.add_subcommand("sweep", "solve over the eps ladder");
  add_common(sweep);
  CLI::App* mms = app.add_subcommand("mms", "manufactured incompressible case");
  add_common(mms);
  CLI::App* check = app.add_subcommand("check", "property suite");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--workers")) opts.workers = workers;
  if (sub->count("--seed")) opts.seed = seed;

  try {
    const RunConfig config = apply_overrides(load_config(config_path), opts);
    if (sub == solve) return cmd_solve(config, opts);
    if (sub == sweep) return cmd_sweep(config, opts);
    if (sub == mms) return cmd_mms(config, opts);
    return cmd_check(config, opts);
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GateViolation& e) {
    std::cerr << "gate violation: " << e.what() << " (use --force to bypass)\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace lowmach
