#include "lowmach/incompressible.hpp"

#include <cmath>

#include "lowmach/errors.hpp"

namespace lowmach {

std::pair<VectorField, Field> stokes_mode_solve(const VectorField& rhs, double mu) {
  const Grid& g = rhs.grid();
  const int n = g.n();
  VectorField U(g);
  Field P(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const Complex rx = rhs[0].coeffs()(i, j), ry = rhs[1].coeffs()(i, j);
      const Complex kr = (kx * rx + ky * ry) / k2;
      P.coeffs()(i, j) = Complex(0.0, -1.0) * kr;
      U[0].coeffs()(i, j) = (rx - kx * kr) / (mu * k2);
      U[1].coeffs()(i, j) = (ry - ky * kr) / (mu * k2);
    }
  return {std::move(U), std::move(P)};
}

namespace {

// Halves omega (down to the floor) whenever the update norm grows.
struct Relaxation {
  double omega;
  double floor;
  double previous = INFINITY;

  void observe(double update) {
    if (update > previous) omega = std::max(floor, 0.5 * omega);
    previous = update;
  }
};

}  // namespace

StokesSolution solve_advected_stokes(const VectorField& a, const VectorField& h, double mu,
                                     const PicardOptions& opts, const VectorField* initial) {
  const Grid& g = h.grid();
  const VectorField rhs0 = mean_zero_project(h);

  StokesSolution sol;
  if (sobolev_norm(a, 0) == 0.0) {
    auto [U, P] = stokes_mode_solve(rhs0, mu);
    sol.final_update_norm = sobolev_norm(initial ? U - *initial : U, 1);
    sol.U = std::move(U);
    sol.P = std::move(P);
    sol.picard_iters = 1;
  } else {
    VectorField U = initial ? *initial : VectorField(g);
    Field P(g);
    Relaxation relax{opts.omega, opts.omega_floor};
    bool converged = false;
    double update = INFINITY;
    int it = 0;
    while (it < opts.max_iter) {
      ++it;
      auto [Ut, Pt] = stokes_mode_solve(rhs0 - advect(a, U), mu);
      VectorField next = (1.0 - relax.omega) * U + relax.omega * Ut;
      update = sobolev_norm(next - U, 1);
      relax.observe(update);
      U = std::move(next);
      P = std::move(Pt);
      if (update < opts.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NoConvergence("advected_stokes", it, update);
    sol.U = std::move(U);
    sol.P = std::move(P);
    sol.picard_iters = it;
    sol.final_update_norm = update;
  }
  const VectorField res = mean_zero_project(advect(a, sol.U) - mu * laplacian(sol.U) + gradient(sol.P) - h);
  sol.residual = sobolev_norm(res, 0);
  return sol;
}

StokesSolution solve_incompressible_ns(const VectorField& f, const VectorField& g, const VectorField& v, double mu,
                                       const PicardOptions& opts, const VectorField* initial) {
  const Grid& grid = f.grid();
  const VectorField h = f + g;
  VectorField U = initial ? *initial : VectorField(grid);
  Field P(grid);
  Relaxation relax{opts.omega, opts.omega_floor};
  const PicardOptions inner = opts;
  double update = INFINITY;
  int it = 0;
  bool converged = false;
  while (it < opts.max_iter) {
    ++it;
    StokesSolution step = solve_advected_stokes(U + v, h, mu, inner, &U);
    VectorField next = (1.0 - relax.omega) * U + relax.omega * step.U;
    update = sobolev_norm(next - U, 1);
    relax.observe(update);
    U = std::move(next);
    P = std::move(step.P);
    if (update < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergence("incompressible_ns", it, update);
  StokesSolution sol{std::move(U), std::move(P), it, update, 0.0};
  sol.residual = residual_incompressible(sol.U, sol.P, f, g, mu, &v).total;
  return sol;
}

K0Report k0_report(const VectorField& U, const Field& P, const VectorField& h) {
  K0Report r;
  for (int m = 1; m <= 4; ++m) r.U_norms[m - 1] = sobolev_norm(U, m);
  for (int m = -1; m <= 2; ++m) r.h_norms[m + 1] = sobolev_norm(h, m);
  const VectorField gp = gradient(P);
  for (int m = 0; m <= 2; ++m) r.grad_P_norms[m] = sobolev_norm(gp, m);

  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  const auto& hn = r.h_norms;
  r.ratios[0] = ratio(r.U_norms[0], hn[0]);
  r.ratios[1] = ratio(r.U_norms[1], hn[1] * std::pow(hn[1] + 1.0, 4));
  r.ratios[2] = ratio(r.U_norms[2], hn[2] * std::pow(hn[2] + 1.0, 8));
  r.ratios[3] = ratio(r.U_norms[3], hn[3] * std::pow(hn[3] + 1.0, 12));
  return r;
}

}  // namespace lowmach
