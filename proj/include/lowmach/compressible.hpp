#pragma once

// Linearized compressible correction problem for (eta, v, theta) given the
// incompressible part (U, P) and lagged fields (v~, theta~):
//
//   U.grad eta + div v / eps + v~.grad eta + eta div v~ = -eps div(P (U + v~))
//   U.grad v - mu Lap v - zeta grad div v + grad(eta + theta) / eps
//       + theta~ grad eta + eta grad theta~ = eps F~ - v~.grad v~
//   U.grad theta - kappa Lap theta + div v / eps + eta div v~
//       = eps G~ - v~.grad theta~ - theta~ div v~
//
// solved by inner Picard iteration around the exact per-mode inverse of the
// constant-coefficient principal part.

#include <array>
#include <random>
#include <utility>

#include "lowmach/fields.hpp"
#include "lowmach/spectral.hpp"

namespace lowmach {

/// Coefficient fields the linearized problem is posed around.
struct LinearizedCoefficients {
  VectorField U;
  Field P;
  VectorField v_tilde;
  Field theta_tilde;
  VectorField f;

  static LinearizedCoefficients zero(const Grid& grid);
  const Grid& grid() const { return P.grid(); }
};

/// (eta, v, theta) triple.
struct Perturbation {
  Field eta;
  VectorField v;
  Field theta;

  static Perturbation zero(const Grid& grid);
  const Grid& grid() const { return eta.grid(); }
};

struct CompressibleRHS {
  Field r_mass;
  VectorField r_mom;
  Field r_energy;
};

struct LinearizedOptions {
  double delta = 0.0;  ///< regularization -delta Lap eta on the mass row
  double tol = 1e-12;
  int max_iter = 500;
  double omega = 1.0;
  double omega_floor = 0.1;
  double gate = 0.5;  ///< bound on ||v~||_3 + ||theta~||_3
  bool force = false;
};

struct LinearizedSolution {
  Field eta;
  VectorField v;
  Field theta;
  int inner_iters = 0;
  /// Magnitudes of the k = 0 right-hand sides (mass, momentum, energy)
  /// projected out at the final iterate.
  std::array<double, 3> k0_discard{};
  double final_update_norm = 0.0;
  double residual = 0.0;

  Perturbation perturbation() const { return {eta, v, theta}; }
};

/// Forcing F~ and heat source G~ evaluated at eta = eta_lag.
std::pair<VectorField, Field> assemble_FG(const Field& P, const VectorField& U, const VectorField& v_tilde,
                                          const Field& theta_tilde, const Field& eta_lag, const VectorField& f,
                                          const FluidParams& p);

/// Solves the 4x4 principal symbol system at wavenumber (kx, ky) != 0.
/// rhs and result are ordered (mass/eta, x-momentum/v_x, y-momentum/v_y, energy/theta).
std::array<Complex, 4> principal_symbol_solve(double kx, double ky, const std::array<Complex, 4>& rhs,
                                              const FluidParams& p, double delta = 0.0);

/// Per-mode exact inversion of the principal part. Throws DegenerateMode if
/// any right-hand side carries a k = 0 component.
Perturbation principal_mode_solve(const CompressibleRHS& rhs, const FluidParams& p, double delta = 0.0);

/// Residual of the linearized system, evaluated term by term.
ResidualReport linearized_residual(const LinearizedCoefficients& c, const FluidParams& p, const Perturbation& x,
                                   double delta = 0.0);

/// Throws GateViolation (unless opts.force), NoConvergence, InnerDivergence.
LinearizedSolution solve_linearized(const LinearizedCoefficients& c, const FluidParams& p,
                                    const LinearizedOptions& opts = {}, const Perturbation* initial = nullptr);

// ---------------------------------------------------------------------------
// Energy diagnostics

/// Individual groups of the variational bilinear form B(x; y).
struct BilinearTerms {
  double regularization = 0;  ///< delta int grad eta_x . grad eta_y
  double advection = 0;       ///< transport by U and v~ (integrated by parts)
  double principal = 0;       ///< (eta+theta)(eta+theta) + mu grad v:grad v + zeta div div + kappa grad theta
  double pressure_row = 0;    ///< the eps / eps^2 inverse-Laplacian group tested with (eta_y + theta_y)
  double momentum_row = 0;
  double energy_row = 0;
  double singular = 0;  ///< the 1/eps block

  double total() const {
    return regularization + advection + principal + pressure_row + momentum_row + energy_row + singular;
  }
};

BilinearTerms bilinear_terms(const Perturbation& x, const Perturbation& y, const LinearizedCoefficients& c,
                             const FluidParams& p, double delta);
double bilinear_form_B(const Perturbation& x, const Perturbation& y, const LinearizedCoefficients& c,
                       const FluidParams& p, double delta);

struct EnergyDiagnostics {
  double B_quadratic = 0;
  double lower_bound_norms = 0;  ///< ||eta||_0^2 + ||v||_1^2 + ||theta||_1^2
  double coercivity_ratio = 0;
  double skew_residual = 0;
};

EnergyDiagnostics energy_diagnostics(const Perturbation& x, const LinearizedCoefficients& c, const FluidParams& p,
                                     double delta);

struct CoercivitySummary {
  int trials = 0;
  double min_ratio = 0;
  double max_ratio = 0;
  EnergyDiagnostics worst;  ///< diagnostics of the trial attaining min_ratio
};

/// Minimum of B(x; x) / (||eta||_0^2 + ||v||_1^2 + ||theta||_1^2) over random
/// mean-free states with modes up to max_k.
CoercivitySummary coercivity_probe(const LinearizedCoefficients& c, const FluidParams& p, double delta, int trials,
                                   std::mt19937_64& rng, int max_k);

/// |int (eta + theta) div v + v . grad(eta + theta)|.
double skew_identity_check(const Field& eta, const Field& theta, const VectorField& v);

}  // namespace lowmach
