#pragma once

#include <array>
#include <string>
#include <vector>

#include "lowmach/compressible.hpp"
#include "lowmach/fields.hpp"
#include "lowmach/incompressible.hpp"

namespace lowmach {

/// Distance between consecutive outer iterates: H1 for U, v, theta and L2
/// for eta.
struct IterateDiff {
  double dU_H1 = 0;
  double dv_H1 = 0;
  double dtheta_H1 = 0;
  double deta_L2 = 0;
  double total = 0;
};

IterateDiff iterate_diff(const SplitState& a, const SplitState& b);

struct KMembership {
  std::array<double, 4> K0_ratios{};
  double v_theta_H3 = 0;  ///< ||v||_3 + ||theta||_3
  double E_gate = 0;
  bool inside_K1 = false;
};

struct FixedPointOptions {
  PicardOptions stokes;
  LinearizedOptions linearized;
  double tol = 1e-10;
  int max_outer = 60;
  double omega = 1.0;
  double a0 = 0.5;    ///< gate on ||v~||_3 for the advected Stokes stage
  double E = 0.5;     ///< K1 radius
  double eps0 = 0.25;
  bool force = false;
  int probe_trials = 20;
  unsigned long long seed = 1;
};

struct MapInfo {
  int stokes_iters = 0;
  int linearized_iters = 0;
  std::array<double, 3> k0_discard{};
  double stokes_residual = 0;
  double linearized_residual = 0;
};

/// One application of the outer map: advected Stokes with a = U~ + v~ and
/// h = f + g, then the linearized compressible solve around the result.
/// NoConvergence is rethrown with the failing stage in its name.
SplitState map_N(const SplitState& current, const VectorField& f, const VectorField& g, const FluidParams& p,
                 const FixedPointOptions& opts, MapInfo* info = nullptr);

struct ContractionReport {
  std::vector<double> ratios;
  bool geometric = false;
};

/// r_i = total_{i+1} / total_i (0 when total_i = 0); geometric when every
/// ratio from the third on is below one.
ContractionReport contraction_report(const std::vector<IterateDiff>& diffs);

struct SolveReport {
  SplitState state;
  CompositeState composite;
  int outer_iters = 0;
  std::vector<IterateDiff> diffs;
  ContractionReport contraction;
  std::vector<std::array<double, 3>> k0_discard;
  std::vector<KMembership> membership;
  ResidualReport transformed;
  double residual_transformed = 0;
  double residual_primitive = 0;
  double final_norm = 0;  ///< ||v||_3 + ||eta||_2 + ||theta||_3
  EnergyDiagnostics energy_at_solution;
  CoercivitySummary coercivity;
  bool converged = false;
  std::string failure;
  double wall_time = 0;
};

/// Iterates map_N from the zero perturbation around the incompressible
/// solution (or from `initial`). Throws GateViolation when eps exceeds eps0
/// without force; every other failure is recorded in the report.
SolveReport fixed_point_solve(const VectorField& f, const VectorField& g, const FluidParams& p,
                              const FixedPointOptions& opts, const SplitState* initial = nullptr);

}  // namespace lowmach
