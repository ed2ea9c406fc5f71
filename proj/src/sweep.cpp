#include "lowmach/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <Eigen/Dense>

#include "lowmach/errors.hpp"

namespace lowmach {

const char* const kSweepCsvHeader =
    "eps,norm_v_H3,norm_theta_H3,norm_eta_H2,perturbation_total,div_v_over_eps_H1,eta_plus_theta_over_eps_H2,"
    "u_gap_H3,pressure_gap_H2,residual_total,outer_iters,wall_time_s,converged";

const std::vector<std::string>& fitted_columns() {
  static const std::vector<std::string> cols{"perturbation_total", "div_v_over_eps_H1", "eta_plus_theta_over_eps_H2",
                                             "u_gap_H3", "pressure_gap_H2"};
  return cols;
}

double column_value(const SweepRow& r, const std::string& c) {
  if (c == "eps") return r.eps;
  if (c == "norm_v_H3") return r.norm_v_H3;
  if (c == "norm_theta_H3") return r.norm_theta_H3;
  if (c == "norm_eta_H2") return r.norm_eta_H2;
  if (c == "perturbation_total") return r.perturbation_total;
  if (c == "div_v_over_eps_H1") return r.div_v_over_eps_H1;
  if (c == "eta_plus_theta_over_eps_H2") return r.eta_plus_theta_over_eps_H2;
  if (c == "u_gap_H3") return r.u_gap_H3;
  if (c == "pressure_gap_H2") return r.pressure_gap_H2;
  if (c == "residual_total") return r.residual_total;
  if (c == "outer_iters") return r.outer_iters;
  if (c == "wall_time_s") return r.wall_time;
  throw InvalidParameter("unknown sweep column '" + c + "'");
}

std::pair<double, double> limit_compare(const SplitState& s, const VectorField& U_ref, const Field& P_ref,
                                        double eps) {
  const double u_gap = sobolev_norm(s.U + s.v - U_ref, 3);
  const double p_gap = sobolev_norm(s.P + (s.eta + s.theta) / eps - P_ref, 2);
  return {u_gap, p_gap};
}

namespace {

SweepRow make_row(double eps, const SolveReport& r) {
  const SplitState& s = r.state;
  SweepRow row;
  row.eps = eps;
  row.norm_v_H3 = sobolev_norm(s.v, 3);
  row.norm_theta_H3 = sobolev_norm(s.theta, 3);
  row.norm_eta_H2 = sobolev_norm(s.eta, 2);
  row.perturbation_total = row.norm_v_H3 + row.norm_theta_H3 + row.norm_eta_H2;
  row.div_v_over_eps_H1 = sobolev_norm(divergence(s.v), 1) / eps;
  row.eta_plus_theta_over_eps_H2 = sobolev_norm(s.eta + s.theta, 2) / eps;
  row.residual_total = r.residual_transformed;
  row.outer_iters = r.outer_iters;
  row.wall_time = r.wall_time;
  row.converged = r.converged;
  row.failure = r.failure;
  return row;
}

}  // namespace

SweepTable epsilon_sweep(const VectorField& f, const VectorField& g, const FluidParams& p_base,
                         const std::vector<double>& eps_list, const SweepOptions& opts) {
  if (eps_list.empty()) throw InvalidParameter("sweep: eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    FluidParams p = p_base;
    p.eps = eps_list[i];
    p.validate();
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw InvalidParameter("sweep: eps_list must be strictly decreasing");
    if (!opts.solver.force && eps_list[i] > opts.solver.eps0)
      throw GateViolation("sweep: eps = " + std::to_string(eps_list[i]) + " exceeds eps0 = " +
                          std::to_string(opts.solver.eps0));
  }
  if (opts.workers < 1) throw InvalidParameter("sweep: workers must be >= 1");

  const Grid& grid = f.grid();
  SweepTable table;
  table.U_ref = VectorField(grid);
  table.P_ref = Field(grid);
  try {
    const StokesSolution ref = solve_incompressible_ns(f, g, VectorField(grid), p_base.mu, opts.solver.stokes);
    table.U_ref = ref.U;
    table.P_ref = ref.P;
    table.reference_residual = ref.residual;
    table.reference_ok = ref.residual <= 1e-8;
  } catch (const NoConvergence&) {
    table.reference_ok = false;
    table.reference_residual = INFINITY;
  }

  const std::size_t count = eps_list.size();
  table.reports.resize(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      FluidParams p = p_base;
      p.eps = eps_list[i];
      table.reports[i] = fixed_point_solve(f, g, p, opts.solver);
    }
  };
  const int nthreads = static_cast<int>(std::min<std::size_t>(opts.workers, count));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    const SolveReport& r = table.reports[i];
    SweepRow row = make_row(eps_list[i], r);
    if (table.reference_ok) {
      std::tie(row.u_gap_H3, row.pressure_gap_H2) = limit_compare(r.state, table.U_ref, table.P_ref, row.eps);
    } else {
      std::tie(row.u_gap_H3, row.pressure_gap_H2) = limit_compare(r.state, r.state.U, r.state.P, row.eps);
      row.reference_fallback = true;
    }
    table.rows.push_back(std::move(row));
  }

  for (const auto& c : fitted_columns()) {
    try {
      table.fits.push_back(fit_rate(table, c));
    } catch (const InsufficientData&) {
    }
  }
  return table;
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values, const std::string& column) {
  if (eps.size() != values.size()) throw InvalidParameter("fit_rate: eps and values differ in length");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (std::isfinite(values[i]) && values[i] > 0.0 && eps[i] > 0.0) pts.emplace_back(eps[i], values[i]);
  if (pts.size() < 3)
    throw InsufficientData("fit_rate(" + column + "): " + std::to_string(pts.size()) +
                           " usable points, need at least 3");

  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = std::log(pts[i].first);
    A(i, 1) = 1.0;
    b(i) = std::log(pts[i].second);
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
  RateFit fit;
  fit.column = column;
  fit.slope = x(0);
  fit.intercept = x(1);
  fit.residual = (A * x - b).norm();
  fit.points = static_cast<int>(m);
  return fit;
}

RateFit fit_rate(const SweepTable& table, const std::string& column) {
  std::vector<double> eps, values;
  for (const auto& r : table.rows) {
    if (!r.converged) continue;
    eps.push_back(r.eps);
    values.push_back(column_value(r, column));
  }
  return fit_rate(eps, values, column);
}

namespace {

SweepCheck strictly_decreasing(const SweepTable& t, const std::string& column) {
  SweepCheck c{column + " strictly decreasing", true, ""};
  const SweepRow* prev = nullptr;
  for (const auto& r : t.rows) {
    if (!r.converged) continue;
    if (prev && !(column_value(r, column) < column_value(*prev, column))) {
      c.passed = false;
      c.detail = "not decreasing at eps = " + std::to_string(r.eps);
    }
    prev = &r;
  }
  return c;
}

SweepCheck halves(const SweepTable& t, const std::string& column) {
  SweepCheck c{column + " halves over the ladder", true, ""};
  const SweepRow *first = nullptr, *last = nullptr;
  for (const auto& r : t.rows)
    if (r.converged) {
      if (!first) first = &r;
      last = &r;
    }
  if (!first || first->eps < 8.0 * last->eps * (1.0 - 1e-12)) {
    c.detail = "ladder spans less than 8x; not applicable";
    return c;
  }
  const double ratio = column_value(*last, column) / column_value(*first, column);
  c.passed = ratio <= 0.5;
  char buf[96];
  std::snprintf(buf, sizeof buf, "ratio %.6g", ratio);
  c.detail = buf;
  return c;
}

}  // namespace

std::vector<SweepCheck> sweep_invariants(const SweepTable& t) {
  std::vector<SweepCheck> out;
  SweepCheck conv{"all rows converged", true, ""};
  for (const auto& r : t.rows)
    if (!r.converged) {
      conv.passed = false;
      conv.detail += "eps = " + std::to_string(r.eps) + ": " + r.failure + "; ";
    }
  out.push_back(conv);

  char buf[96];
  std::snprintf(buf, sizeof buf, "residual %.3e", t.reference_residual);
  out.push_back({"reference residual <= 1e-8", t.reference_ok, buf});

  out.push_back(strictly_decreasing(t, "perturbation_total"));
  out.push_back(strictly_decreasing(t, "u_gap_H3"));
  out.push_back(strictly_decreasing(t, "pressure_gap_H2"));

  SweepCheck rate{"perturbation_total rate in [0.8, 1.2]", false, ""};
  try {
    const RateFit fit = fit_rate(t, "perturbation_total");
    rate.passed = fit.slope >= 0.8 && fit.slope <= 1.2;
    std::snprintf(buf, sizeof buf, "slope %.6g", fit.slope);
    rate.detail = buf;
  } catch (const InsufficientData& e) {
    // single-row ladders have no rate to check
    rate.passed = t.rows.size() < 3;
    rate.detail = e.what();
  }
  out.push_back(rate);

  out.push_back(halves(t, "eta_plus_theta_over_eps_H2"));
  out.push_back(halves(t, "div_v_over_eps_H1"));
  return out;
}

void write_sweep_csv(const SweepTable& table, std::ostream& out, bool timing) {
  out << kSweepCsvHeader << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const auto& r : table.rows) {
    for (double v : {r.eps, r.norm_v_H3, r.norm_theta_H3, r.norm_eta_H2, r.perturbation_total, r.div_v_over_eps_H1,
                     r.eta_plus_theta_over_eps_H2, r.u_gap_H3, r.pressure_gap_H2, r.residual_total}) {
      num(v);
      out << ',';
    }
    out << r.outer_iters << ',';
    num(timing ? r.wall_time : 0.0);
    out << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace lowmach
