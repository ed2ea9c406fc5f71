#include "lowmach/fields.hpp"

#include <cmath>

#include "lowmach/errors.hpp"

namespace lowmach {

void FluidParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(lambda) || !std::isfinite(kappa) || !std::isfinite(eps))
    throw InvalidParameter("params: all parameters must be finite");
  if (!(mu > 0.0)) throw InvalidParameter("params: mu > 0 violated (mu = " + std::to_string(mu) + ")");
  if (!(kappa > 0.0))
    throw InvalidParameter("params: kappa > 0 violated (kappa = " + std::to_string(kappa) + ")");
  if (2.0 * mu + kDim * lambda < 0.0) throw InvalidParameter("params: 2*mu + d*lambda >= 0 violated");
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidParameter("params: eps in (0, 1) violated (eps = " + std::to_string(eps) + ")");
}

SplitState SplitState::zero(const Grid& grid) {
  return SplitState{VectorField(grid), Field(grid), VectorField(grid), Field(grid), Field(grid)};
}

CompositeState CompositeState::zero(const Grid& grid) {
  return CompositeState{VectorField(grid), Field(grid), Field(grid)};
}

CompositeState compose(const SplitState& s, const FluidParams& p) {
  return CompositeState{s.U + s.v, mean_zero_project(p.eps * s.P + s.eta), s.theta};
}

SplitState decompose(const CompositeState& c, const VectorField& U, const Field& P, const FluidParams& p) {
  return SplitState{U, P, c.u - U, c.rho - p.eps * P, c.theta};
}

SymmetricTensor deformation_tensor(const VectorField& u) {
  return SymmetricTensor{derivative(u[0], 0), 0.5 * (derivative(u[1], 0) + derivative(u[0], 1)),
                         derivative(u[1], 1)};
}

Field dissipation(const VectorField& u, const FluidParams& p) {
  const SymmetricTensor d = deformation_tensor(u);
  const Field div = divergence(u);
  const Field dd = dealiased_product(d.xx, d.xx) + 2.0 * dealiased_product(d.xy, d.xy) +
                   dealiased_product(d.yy, d.yy);
  return 2.0 * p.mu * dd + p.lambda * dealiased_product(div, div);
}

// ---------------------------------------------------------------------------
// Residual reports

const EquationResidual& ResidualReport::at(const std::string& name) const {
  for (const auto& e : equations)
    if (e.name == name) return e;
  throw InvalidParameter("residual report has no equation '" + name + "'");
}

double ResidualReport::k0_total() const {
  double s = 0.0;
  for (const auto& e : equations) s += e.k0 * e.k0;
  return std::sqrt(s);
}

ResidualReport make_report(std::vector<std::pair<std::string, Field>> residuals) {
  ResidualReport r;
  double sum = 0.0;
  for (auto& [name, field] : residuals) {
    EquationResidual e;
    e.name = name;
    e.k0 = std::abs(field.coeffs()(0, 0));
    e.field = mean_zero_project(std::move(field));
    e.l2 = sobolev_norm(e.field, 0);
    e.h1 = sobolev_norm(e.field, 1);
    sum += e.l2 * e.l2;
    r.equations.push_back(std::move(e));
  }
  r.total = std::sqrt(sum);
  return r;
}

ResidualReport residual_transformed(const CompositeState& c, const FluidParams& p, const VectorField& f,
                                    const VectorField& g) {
  const double eps = p.eps;
  const VectorField& u = c.u;
  const Field div_u = divergence(u);
  const Field density = 1.0 + eps * c.rho;  // 1 + eps rho
  const Field heat = 1.0 + eps * c.theta;   // 1 + eps theta

  Field mass = div_u + eps * divergence(dealiased_product(c.rho, u));

  const VectorField uu = advect(u, u);
  const VectorField grad_rho = gradient(c.rho);
  const VectorField grad_theta = gradient(c.theta);
  const VectorField grad_div_u = gradient(div_u);
  const VectorField lap_u = laplacian(u);
  VectorField momentum(c.grid());
  for (int i = 0; i < kDim; ++i) {
    momentum[i] = dealiased_product(density, uu[i]) +
                  (dealiased_product(heat, grad_rho[i]) + dealiased_product(density, grad_theta[i])) / eps -
                  p.mu * lap_u[i] - p.zeta() * grad_div_u[i] - dealiased_product(density, f[i]) - g[i];
  }

  // Triple products group as rho * (theta * div u) throughout.
  const Field theta_div = dealiased_product(c.theta, div_u);
  Field energy = eps * dealiased_product(density, advect(u, c.theta)) + div_u +
                 eps * dealiased_product(c.rho + c.theta, div_u) + eps * eps * dealiased_product(c.rho, theta_div) -
                 eps * p.kappa * laplacian(c.theta) - eps * eps * dissipation(u, p);

  return make_report({{"mass", std::move(mass)},
                      {"momentum_x", std::move(momentum[0])},
                      {"momentum_y", std::move(momentum[1])},
                      {"energy", std::move(energy)}});
}

ResidualReport residual_primitive(const CompositeState& c, const FluidParams& p, const VectorField& f,
                                  const VectorField& g) {
  const double eps = p.eps;
  const Field density = 1.0 + eps * c.rho;
  const Field temperature = 1.0 + eps * c.theta;
  const double min_density = density.to_physical().minCoeff();
  if (min_density <= 1e-6)
    throw NegativeDensity("residual_primitive: density minimum " + std::to_string(min_density) +
                          " is not positive");

  const VectorField& u = c.u;
  const Field div_u = divergence(u);
  const Field pressure = dealiased_product(density, temperature);

  Field mass = divergence(dealiased_product(density, u));

  const VectorField uu = advect(u, u);
  const VectorField grad_p = gradient(pressure);
  const VectorField lap_u = laplacian(u);
  const VectorField grad_div_u = gradient(div_u);
  VectorField momentum(c.grid());
  for (int i = 0; i < kDim; ++i) {
    momentum[i] = dealiased_product(density, uu[i]) + grad_p[i] / (eps * eps) - p.mu * lap_u[i] -
                  p.zeta() * grad_div_u[i] - dealiased_product(density, f[i]) - g[i];
  }

  Field energy = dealiased_product(density, advect(u, temperature)) + dealiased_product(pressure, div_u) -
                 p.kappa * laplacian(temperature) - eps * eps * dissipation(u, p);

  return make_report({{"mass", std::move(mass)},
                      {"momentum_x", std::move(momentum[0])},
                      {"momentum_y", std::move(momentum[1])},
                      {"energy", std::move(energy)}});
}

ResidualReport residual_incompressible(const VectorField& U, const Field& P, const VectorField& f,
                                       const VectorField& g, double mu, const VectorField* v) {
  VectorField momentum = advect(U, U) - mu * laplacian(U) + gradient(P) - f - g;
  if (v != nullptr) momentum += advect(*v, U);
  return make_report({{"momentum_x", std::move(momentum[0])},
                      {"momentum_y", std::move(momentum[1])},
                      {"continuity", divergence(U)}});
}

VectorField mms_forcing(const VectorField& U, const Field& P, double mu) {
  const double div_norm = sobolev_norm(divergence(U), 0);
  if (div_norm > 1e-12)
    throw NotSolenoidal("mms_forcing: ||div U||_0 = " + std::to_string(div_norm) + " exceeds 1e-12");
  return advect(U, U) - mu * laplacian(U) + gradient(P);
}

}  // namespace lowmach
