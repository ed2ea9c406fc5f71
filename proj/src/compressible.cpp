#include "lowmach/compressible.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "lowmach/errors.hpp"

namespace lowmach {

LinearizedCoefficients LinearizedCoefficients::zero(const Grid& grid) {
  return {VectorField(grid), Field(grid), VectorField(grid), Field(grid), VectorField(grid)};
}

Perturbation Perturbation::zero(const Grid& grid) { return {Field(grid), VectorField(grid), Field(grid)}; }

std::pair<VectorField, Field> assemble_FG(const Field& P, const VectorField& U, const VectorField& v_tilde,
                                          const Field& theta_tilde, const Field& eta_lag, const VectorField& f,
                                          const FluidParams& p) {
  const Field rho = p.eps * P + eta_lag;
  const VectorField u = U + v_tilde;
  const Field div_vt = divergence(v_tilde);

  VectorField F = dealiased_product(rho, f) - dealiased_product(rho, advect(u, u)) -
                  dealiased_product(theta_tilde, gradient(P)) - dealiased_product(P, gradient(theta_tilde));
  Field G = dissipation(u, p) - dealiased_product(rho, advect(u, theta_tilde)) -
            dealiased_product(rho, dealiased_product(theta_tilde, div_vt)) - dealiased_product(P, div_vt);
  return {std::move(F), std::move(G)};
}

std::array<Complex, 4> principal_symbol_solve(double kx, double ky, const std::array<Complex, 4>& rhs,
                                              const FluidParams& p, double delta) {
  const double k2 = kx * kx + ky * ky;
  if (k2 == 0.0) throw DegenerateMode("principal_symbol_solve: |k| = 0");
  const double eps = p.eps;
  const Complex I(0.0, 1.0);
  const Complex r_mass = rhs[0], r_energy = rhs[3];
  const Complex kr = kx * rhs[1] + ky * rhs[2];
  const double visc = p.mu + p.zeta();

  Complex s, eta, theta;  // s = k . v
  if (delta == 0.0) {
    s = -I * eps * r_mass;
    theta = (r_energy - r_mass) / (p.kappa * k2);
    eta = -I * eps * (kr - visc * k2 * s) / k2 - theta;
  } else {
    // (eta, s, theta) rows: mass, longitudinal momentum, energy.
    Eigen::Matrix3cd A;
    A << delta * k2, I / eps, 0.0,
         I * k2 / eps, visc * k2, I * k2 / eps,
         0.0, I / eps, p.kappa * k2;
    const Eigen::Vector3cd x = A.partialPivLu().solve(Eigen::Vector3cd(r_mass, kr, r_energy));
    eta = x(0);
    s = x(1);
    theta = x(2);
  }
  const Complex vx = (rhs[1] - kx * kr / k2) / (p.mu * k2) + kx * s / k2;
  const Complex vy = (rhs[2] - ky * kr / k2) / (p.mu * k2) + ky * s / k2;
  return {eta, vx, vy, theta};
}

Perturbation principal_mode_solve(const CompressibleRHS& rhs, const FluidParams& p, double delta) {
  const Grid& g = rhs.r_mass.grid();
  const int n = g.n();
  const std::array<const Field*, 4> in{&rhs.r_mass, &rhs.r_mom[0], &rhs.r_mom[1], &rhs.r_energy};
  for (const Field* f : in)
    if (std::abs(f->coeffs()(0, 0)) > 1e-13) throw DegenerateMode("principal_mode_solve: rhs has a k = 0 component");

  Perturbation out = Perturbation::zero(g);
  const std::array<Field*, 4> dst{&out.eta, &out.v[0], &out.v[1], &out.theta};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      if (kx == 0.0 && ky == 0.0) continue;
      std::array<Complex, 4> r;
      for (int q = 0; q < 4; ++q) r[q] = in[q]->coeffs()(i, j);
      const auto x = principal_symbol_solve(kx, ky, r, p, delta);
      for (int q = 0; q < 4; ++q) dst[q]->coeffs()(i, j) = x[q];
    }
  return out;
}

ResidualReport linearized_residual(const LinearizedCoefficients& c, const FluidParams& p, const Perturbation& x,
                                   double delta) {
  const double eps = p.eps;
  const VectorField& U = c.U;
  const VectorField& vt = c.v_tilde;
  const Field& tt = c.theta_tilde;
  const Field div_v = divergence(x.v);
  const Field div_vt = divergence(vt);
  const auto [F, G] = assemble_FG(c.P, U, vt, tt, x.eta, c.f, p);

  Field mass = advect(U, x.eta) + div_v / eps + advect(vt, x.eta) + dealiased_product(x.eta, div_vt) +
               eps * divergence(dealiased_product(c.P, U + vt));
  if (delta != 0.0) mass -= delta * laplacian(x.eta);

  VectorField momentum = advect(U, x.v) - p.mu * laplacian(x.v) - p.zeta() * gradient(div_v) +
                         gradient(x.eta + x.theta) / eps + dealiased_product(tt, gradient(x.eta)) +
                         dealiased_product(x.eta, gradient(tt)) - eps * F + advect(vt, vt);

  Field energy = advect(U, x.theta) - p.kappa * laplacian(x.theta) + div_v / eps + dealiased_product(x.eta, div_vt) -
                 eps * G + advect(vt, tt) + dealiased_product(tt, div_vt);

  return make_report({{"mass", std::move(mass)},
                      {"momentum_x", std::move(momentum[0])},
                      {"momentum_y", std::move(momentum[1])},
                      {"energy", std::move(energy)}});
}

namespace {

double update_norm(const Perturbation& a, const Perturbation& b) {
  return sobolev_norm(a.eta - b.eta, 1) + sobolev_norm(a.v - b.v, 1) + sobolev_norm(a.theta - b.theta, 1);
}

Perturbation blend(const Perturbation& old, const Perturbation& fresh, double omega) {
  if (omega == 1.0) return fresh;
  return {(1.0 - omega) * old.eta + omega * fresh.eta, (1.0 - omega) * old.v + omega * fresh.v,
          (1.0 - omega) * old.theta + omega * fresh.theta};
}

}  // namespace

LinearizedSolution solve_linearized(const LinearizedCoefficients& c, const FluidParams& p,
                                    const LinearizedOptions& opts, const Perturbation* initial) {
  const Grid& g = c.grid();
  const double eps = p.eps;
  if (!opts.force) {
    const double size = sobolev_norm(c.v_tilde, 3) + sobolev_norm(c.theta_tilde, 3);
    if (size > opts.gate)
      throw GateViolation("solve_linearized: ||v~||_3 + ||theta~||_3 = " + std::to_string(size) +
                          " exceeds gate " + std::to_string(opts.gate));
  }

  const VectorField& U = c.U;
  const VectorField& vt = c.v_tilde;
  const Field& tt = c.theta_tilde;
  const VectorField u = U + vt;
  const Field div_vt = divergence(vt);

  // eta-independent parts of the right-hand sides, and the coefficients
  // multiplying eta inside F~ and G~.
  const auto [F0, G0] = assemble_FG(c.P, U, vt, tt, Field(g), c.f, p);
  const VectorField eta_coef_F = c.f - advect(u, u);
  const Field eta_coef_G = advect(u, tt) + dealiased_product(tt, div_vt);
  const Field mass_const = -eps * divergence(dealiased_product(c.P, u));
  const VectorField mom_const = eps * F0 - advect(vt, vt);
  const Field energy_const = eps * G0 - advect(vt, tt) - dealiased_product(tt, div_vt);
  const VectorField grad_tt = gradient(tt);

  Perturbation x = initial ? *initial : Perturbation::zero(g);
  LinearizedSolution sol;
  double omega = opts.omega;
  double previous = INFINITY;
  int doublings = 0;
  double update = INFINITY;
  int it = 0;
  while (it < opts.max_iter) {
    ++it;
    const Field eta_div = dealiased_product(x.eta, div_vt);
    CompressibleRHS rhs{mass_const - advect(u, x.eta) - eta_div,
                        mom_const + eps * dealiased_product(x.eta, eta_coef_F) - advect(U, x.v) -
                            dealiased_product(tt, gradient(x.eta)) - dealiased_product(x.eta, grad_tt),
                        energy_const - eps * dealiased_product(x.eta, eta_coef_G) - advect(U, x.theta) - eta_div};
    sol.k0_discard = {std::abs(rhs.r_mass.coeffs()(0, 0)),
                      std::hypot(std::abs(rhs.r_mom[0].coeffs()(0, 0)), std::abs(rhs.r_mom[1].coeffs()(0, 0))),
                      std::abs(rhs.r_energy.coeffs()(0, 0))};
    rhs.r_mass = mean_zero_project(std::move(rhs.r_mass));
    rhs.r_mom = mean_zero_project(std::move(rhs.r_mom));
    rhs.r_energy = mean_zero_project(std::move(rhs.r_energy));

    Perturbation fresh = principal_mode_solve(rhs, p, opts.delta);
    update = omega * update_norm(fresh, x);

    if (update < opts.tol) {
      x = std::move(fresh);
      sol.inner_iters = it;
      sol.final_update_norm = update;
      sol.eta = std::move(x.eta);
      sol.v = std::move(x.v);
      sol.theta = std::move(x.theta);
      sol.residual = linearized_residual(c, p, sol.perturbation(), opts.delta).total;
      return sol;
    }
    doublings = update > 2.0 * previous ? doublings + 1 : 0;
    if (doublings >= 2) throw InnerDivergence("linearized", it, update);
    if (update > previous) omega = std::max(opts.omega_floor, 0.5 * omega);
    previous = update;
    x = blend(x, fresh, omega);
  }
  throw NoConvergence("linearized", it, update);
}

}  // namespace lowmach
