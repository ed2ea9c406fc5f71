#pragma once

#include <string>
#include <vector>

#include "lowmach/spectral.hpp"

namespace lowmach {

/// Physical parameters. Gas constant, heat capacity and reference
/// temperature are normalized to one and are not fields.
struct FluidParams {
  double mu = 1.0;
  double lambda = 0.0;
  double kappa = 1.0;
  double eps = 0.05;

  double zeta() const { return mu + lambda; }

  /// Throws InvalidParameter naming the first violated invariant.
  void validate() const;

  bool operator==(const FluidParams&) const = default;
};

/// Unknowns of the split formulation: incompressible part (U, P) and the
/// compressible correction (v, eta, theta).
struct SplitState {
  VectorField U;
  Field P;
  VectorField v;
  Field eta;
  Field theta;

  static SplitState zero(const Grid& grid);
  const Grid& grid() const { return P.grid(); }
};

/// Unknowns of the transformed system: velocity u, density perturbation rho
/// (density 1 + eps*rho) and temperature perturbation theta (1 + eps*theta).
struct CompositeState {
  VectorField u;
  Field rho;
  Field theta;

  static CompositeState zero(const Grid& grid);
  const Grid& grid() const { return rho.grid(); }
};

/// u = U + v, rho = eps*P + eta.
CompositeState compose(const SplitState& s, const FluidParams& p);
/// Inverse of compose for a given incompressible part (U, P).
SplitState decompose(const CompositeState& c, const VectorField& U, const Field& P, const FluidParams& p);

struct SymmetricTensor {
  Field xx, xy, yy;
};

SymmetricTensor deformation_tensor(const VectorField& u);
/// 2 mu D(u):D(u) + lambda (div u)^2, dealiased.
Field dissipation(const VectorField& u, const FluidParams& p);

struct EquationResidual {
  std::string name;
  Field field;    ///< mean-free residual field
  double l2 = 0;  ///< ||field||_0
  double h1 = 0;  ///< ||field||_1
  double k0 = 0;  ///< |mean| of the raw residual, projected out of `field`
};

/// Residual fields of one system. `total` is the root-sum-square of the L2
/// norms of the mean-free residuals; k = 0 components are reported per
/// equation in `k0` and excluded from `total`.
struct ResidualReport {
  std::vector<EquationResidual> equations;
  double total = 0;

  const EquationResidual& at(const std::string& name) const;
  double k0_total() const;
};

ResidualReport make_report(std::vector<std::pair<std::string, Field>> residuals);

/// Residual of the transformed system in (u, rho, theta).
ResidualReport residual_transformed(const CompositeState& c, const FluidParams& p, const VectorField& f,
                                    const VectorField& g);

/// Residual of the primitive system in density 1 + eps*rho, temperature
/// 1 + eps*theta and pressure density*temperature. Throws NegativeDensity if
/// 1 + eps*min(rho) <= 1e-6 on the collocation grid.
ResidualReport residual_primitive(const CompositeState& c, const FluidParams& p, const VectorField& f,
                                  const VectorField& g);

/// Residual of the steady incompressible system, with the optional extra
/// advection v . grad U of the split formulation.
ResidualReport residual_incompressible(const VectorField& U, const Field& P, const VectorField& f,
                                       const VectorField& g, double mu, const VectorField* v = nullptr);

/// h = U . grad U - mu Lap U + grad P for a solenoidal U.
VectorField mms_forcing(const VectorField& U, const Field& P, double mu);

// Snapshot archive. Little-endian layout:
//   8 bytes  magic "LMSNAP01"
//   u32      n
//   f64      dealias_fraction
//   u32      field count
//   per field: u32 name length, name bytes, u32 n,
//              n*n pairs (f64 re, f64 im) with k_x ascending over rows
//              (-n/2+1 .. n/2) and k_y ascending within a row.
struct NamedField {
  std::string name;
  Field field;
};

void write_snapshot(const std::string& path, const Grid& grid, const std::vector<NamedField>& fields);
std::vector<NamedField> read_snapshot(const std::string& path, Grid* grid_out = nullptr);

void save_state(const std::string& path, const SplitState& s);
SplitState load_state(const std::string& path);

}  // namespace lowmach
