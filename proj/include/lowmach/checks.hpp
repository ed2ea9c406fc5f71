#pragma once

#include <array>
#include <string>
#include <vector>

#include "lowmach/config.hpp"

namespace lowmach {

struct MmsRow {
  std::string quantity;
  double value = 0;
  double threshold = 0;  ///< 0 means reported only
};

struct MmsResult {
  std::string name;
  std::vector<MmsRow> rows;
  bool passed = false;
};

/// Manufactured incompressible cases: taylor_green, gradient_force and
/// stokes_shear. Unknown names throw InvalidParameter.
MmsResult run_mms(const std::string& name, const Grid& grid, double mu, const PicardOptions& opts);

/// Dense solve of the 4x4 principal symbol (columns eta, v_x, v_y, theta)
/// in extended precision.
std::array<Complex, 4> dense_symbol_solve(double kx, double ky, const std::array<Complex, 4>& rhs,
                                          const FluidParams& p, double delta);

/// Exact product of two fields on a grid of twice the resolution, truncated
/// back to the dealiasing band of `a`'s grid.
Field padded_product(const Field& a, const Field& b);

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Every module's property checks at the configured grid, parameters, trial
/// count and seed.
std::vector<CheckResult> run_checks(const RunConfig& config);

}  // namespace lowmach
