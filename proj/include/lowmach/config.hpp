#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lowmach/fixedpoint.hpp"
#include "lowmach/sweep.hpp"

namespace lowmach {

/// One explicit forcing coefficient: `target:comp:kx:ky:re:im` with target
/// f or g and comp x or y.
struct ForcingMode {
  char target = 'f';
  int comp = 0;
  int kx = 0;
  int ky = 0;
  double re = 0;
  double im = 0;
  bool operator==(const ForcingMode&) const = default;
};

/// Flat key = value run configuration. Lines starting with # are comments.
///
/// Keys: n, dealias_fraction, mu, lambda, kappa, eps, eps_list, forcing
/// (taylor_green | kolmogorov | modes | zero), forcing_amplitude, forcing_k,
/// forcing_modes, tol, max_outer, max_inner, omega, delta, a0, E, eps0,
/// lin_gate, seed, workers, trials, mms_case, timing, out.
struct RunConfig {
  int n = 32;
  double dealias_fraction = 2.0 / 3.0;
  double mu = 1.0;
  double lambda = 0.0;
  double kappa = 1.0;
  double eps = 0.05;
  std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
  std::string forcing = "taylor_green";
  double forcing_amplitude = 1.0;
  int forcing_k = 1;
  std::vector<ForcingMode> forcing_modes;
  double tol = 1e-10;
  int max_outer = 60;
  int max_inner = 500;
  double omega = 1.0;
  double delta = 0.0;
  double a0 = 0.5;
  double E = 0.5;
  double eps0 = 0.25;
  double lin_gate = 0.5;
  unsigned long long seed = 1;
  int workers = 1;
  int trials = 20;
  std::string mms_case = "taylor_green";
  bool timing = false;
  std::string out = "out";

  bool operator==(const RunConfig&) const = default;

  /// Throws InvalidParameter naming the first violated constraint.
  void validate() const;

  Grid grid() const;
  FluidParams params(double eps_value) const;
  FluidParams params() const { return params(eps); }
  FixedPointOptions solver_options(bool force = false) const;
  /// (f, g) on `grid` for the configured forcing.
  std::pair<VectorField, VectorField> forcing_fields(const Grid& grid) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// f = A (sin x cos y, -cos x sin y).
VectorField taylor_green_forcing(const Grid& grid, double amplitude);
/// f = A (sin k y, 0).
VectorField kolmogorov_forcing(const Grid& grid, double amplitude, int k);

}  // namespace lowmach
