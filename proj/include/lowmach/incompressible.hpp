#pragma once

#include <array>
#include <utility>

#include "lowmach/fields.hpp"
#include "lowmach/spectral.hpp"

namespace lowmach {

/// Lagged (Picard) iteration controls shared by the iterative solvers.
struct PicardOptions {
  double tol = 1e-12;
  int max_iter = 200;
  /// Initial under-relaxation; halved whenever the update norm grows.
  double omega = 1.0;
  double omega_floor = 0.1;
};

struct StokesSolution {
  VectorField U;
  Field P;
  int picard_iters = 0;
  double final_update_norm = 0.0;
  /// Residual total of the solved system, recomputed after convergence.
  double residual = 0.0;
};

/// Exact per-mode inversion of -mu Lap U + grad P = rhs, div U = 0.
/// The k = 0 component of rhs is ignored.
std::pair<VectorField, Field> stokes_mode_solve(const VectorField& rhs, double mu);

/// Solves (a . grad) U - mu Lap U + grad P = h, div U = 0 by Picard
/// iteration on the advection term. Throws NoConvergence.
StokesSolution solve_advected_stokes(const VectorField& a, const VectorField& h, double mu,
                                     const PicardOptions& opts = {}, const VectorField* initial = nullptr);

/// Steady incompressible Navier-Stokes with an extra advecting field v:
/// U . grad U + v . grad U - mu Lap U + grad P = f + g, div U = 0.
/// Fixed point of U -> solve_advected_stokes(U + v, f + g). Throws NoConvergence.
StokesSolution solve_incompressible_ns(const VectorField& f, const VectorField& g, const VectorField& v, double mu,
                                       const PicardOptions& opts = {}, const VectorField* initial = nullptr);

/// Norm-bound diagnostics for the incompressible iterate, with all bound
/// constants set to one.
struct K0Report {
  std::array<double, 4> U_norms{};       ///< ||U||_1 .. ||U||_4
  std::array<double, 4> h_norms{};       ///< ||h||_-1 .. ||h||_2
  std::array<double, 3> grad_P_norms{};  ///< ||grad P||_0 .. ||grad P||_2
  std::array<double, 4> ratios{};        ///< r_1 .. r_4
};

K0Report k0_report(const VectorField& U, const Field& P, const VectorField& h);

}  // namespace lowmach
