#include "lowmach/fixedpoint.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "lowmach/errors.hpp"

namespace lowmach {

IterateDiff iterate_diff(const SplitState& a, const SplitState& b) {
  IterateDiff d;
  d.dU_H1 = sobolev_norm(a.U - b.U, 1);
  d.dv_H1 = sobolev_norm(a.v - b.v, 1);
  d.dtheta_H1 = sobolev_norm(a.theta - b.theta, 1);
  d.deta_L2 = sobolev_norm(a.eta - b.eta, 0);
  d.total = d.dU_H1 + d.dv_H1 + d.dtheta_H1 + d.deta_L2;
  return d;
}

SplitState map_N(const SplitState& current, const VectorField& f, const VectorField& g, const FluidParams& p,
                 const FixedPointOptions& opts, MapInfo* info) {
  if (!opts.force) {
    const double v3 = sobolev_norm(current.v, 3);
    if (v3 >= opts.a0)
      throw GateViolation("map_N: ||v~||_3 = " + std::to_string(v3) + " is not below a0 = " + std::to_string(opts.a0));
  }

  StokesSolution stokes;
  try {
    stokes = solve_advected_stokes(current.U + current.v, f + g, p.mu, opts.stokes, &current.U);
  } catch (const NoConvergence& e) {
    throw NoConvergence("map_N/incompressible/" + e.stage(), e.iterations(), e.last_update());
  }

  LinearizedCoefficients coeffs{stokes.U, stokes.P, current.v, current.theta, f};
  LinearizedOptions lin = opts.linearized;
  lin.force = lin.force || opts.force;
  const Perturbation warm{current.eta, current.v, current.theta};
  LinearizedSolution cs;
  try {
    cs = solve_linearized(coeffs, p, lin, &warm);
  } catch (const NoConvergence& e) {
    throw NoConvergence("map_N/compressible/" + e.stage(), e.iterations(), e.last_update());
  }

  if (info != nullptr) {
    info->stokes_iters = stokes.picard_iters;
    info->linearized_iters = cs.inner_iters;
    info->k0_discard = cs.k0_discard;
    info->stokes_residual = stokes.residual;
    info->linearized_residual = cs.residual;
  }
  return SplitState{std::move(stokes.U), std::move(stokes.P), std::move(cs.v), std::move(cs.eta),
                    std::move(cs.theta)};
}

ContractionReport contraction_report(const std::vector<IterateDiff>& diffs) {
  ContractionReport r;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
    r.ratios.push_back(diffs[i].total > 0.0 ? diffs[i + 1].total / diffs[i].total : 0.0);
  r.geometric = true;
  for (std::size_t i = 2; i < r.ratios.size(); ++i)
    if (!(r.ratios[i] < 1.0)) r.geometric = false;
  return r;
}

namespace {

KMembership membership_of(const SplitState& s, const VectorField& h, double E) {
  KMembership k;
  k.K0_ratios = k0_report(s.U, s.P, h).ratios;
  k.v_theta_H3 = sobolev_norm(s.v, 3) + sobolev_norm(s.theta, 3);
  k.E_gate = E;
  k.inside_K1 = k.v_theta_H3 <= E;
  return k;
}

SplitState relax(const SplitState& old, SplitState fresh, double omega) {
  if (omega == 1.0) return fresh;
  auto mix = [omega](const auto& a, const auto& b) { return (1.0 - omega) * a + omega * b; };
  return SplitState{mix(old.U, fresh.U), mix(old.P, fresh.P), mix(old.v, fresh.v), mix(old.eta, fresh.eta),
                    mix(old.theta, fresh.theta)};
}

}  // namespace

SolveReport fixed_point_solve(const VectorField& f, const VectorField& g, const FluidParams& p,
                              const FixedPointOptions& opts, const SplitState* initial) {
  p.validate();
  if (!opts.force && p.eps > opts.eps0)
    throw GateViolation("fixed_point_solve: eps = " + std::to_string(p.eps) + " exceeds eps0 = " +
                        std::to_string(opts.eps0));

  const auto start = std::chrono::steady_clock::now();
  const Grid& grid = f.grid();
  const VectorField h = f + g;
  SolveReport report;

  SplitState state = SplitState::zero(grid);
  try {
    if (initial != nullptr) {
      state = *initial;
    } else {
      StokesSolution base = solve_incompressible_ns(f, g, VectorField(grid), p.mu, opts.stokes);
      state.U = std::move(base.U);
      state.P = std::move(base.P);
    }

    for (int it = 1; it <= opts.max_outer; ++it) {
      MapInfo info;
      SplitState next = relax(state, map_N(state, f, g, p, opts, &info), opts.omega);
      next.P = mean_zero_project(std::move(next.P));
      next.eta = mean_zero_project(std::move(next.eta));
      const IterateDiff diff = iterate_diff(next, state);
      state = std::move(next);
      report.outer_iters = it;
      report.diffs.push_back(diff);
      report.k0_discard.push_back(info.k0_discard);
      report.membership.push_back(membership_of(state, h, opts.E));
      if (diff.total < opts.tol) {
        report.converged = true;
        break;
      }
    }
    if (!report.converged)
      report.failure = "outer iteration did not converge in " + std::to_string(opts.max_outer) + " iterations";
  } catch (const NoConvergence& e) {
    report.failure = e.what();
  } catch (const GateViolation& e) {
    report.failure = e.what();
  }

  report.state = state;
  report.composite = compose(state, p);
  report.contraction = contraction_report(report.diffs);
  report.transformed = residual_transformed(report.composite, p, f, g);
  report.residual_transformed = report.transformed.total;
  try {
    report.residual_primitive = residual_primitive(report.composite, p, f, g).total;
  } catch (const NegativeDensity& e) {
    report.residual_primitive = std::numeric_limits<double>::quiet_NaN();
    if (report.failure.empty()) report.failure = e.what();
    report.converged = false;
  }
  report.final_norm = sobolev_norm(state.v, 3) + sobolev_norm(state.eta, 2) + sobolev_norm(state.theta, 3);

  const LinearizedCoefficients coeffs{state.U, state.P, state.v, state.theta, f};
  report.energy_at_solution = energy_diagnostics(Perturbation{state.eta, state.v, state.theta}, coeffs, p, 0.0);
  if (opts.probe_trials > 0) {
    std::mt19937_64 rng(opts.seed);
    const int max_k = std::max(1, grid.n() / 6);
    report.coercivity = coercivity_probe(coeffs, p, opts.linearized.delta, opts.probe_trials, rng, max_k);
  }

  if (report.converged && !(report.residual_transformed <= 10.0 * opts.tol)) {
    report.converged = false;
    report.failure = "residual " + std::to_string(report.residual_transformed) + " exceeds 10 * tol";
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace lowmach
