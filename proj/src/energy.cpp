// Energy-method diagnostics for the linearized compressible problem: the
// variational bilinear form with its inverse-Laplacian pressure row, a
// randomized coercivity probe, and the transport skew identity.
//
// All integrals are unit-measure L2 inner products evaluated by Parseval,
// which is exact quadrature for resolved fields.

#include <algorithm>
#include <cmath>
#include <limits>

#include "lowmach/compressible.hpp"

namespace lowmach {

namespace {

double grad_inner(const Field& a, const Field& b) { return inner(gradient(a), gradient(b)); }

double grad_inner(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i) s += grad_inner(a[i], b[i]);
  return s;
}

Field inv_lap_div(const VectorField& w) { return inverse_laplacian(divergence(w)); }

}  // namespace

BilinearTerms bilinear_terms(const Perturbation& x, const Perturbation& y, const LinearizedCoefficients& c,
                             const FluidParams& p, double delta) {
  const double eps = p.eps;
  const VectorField& U = c.U;
  const VectorField& vt = c.v_tilde;
  const Field& tt = c.theta_tilde;
  const VectorField u = U + vt;
  const VectorField u_adv_u = advect(u, u);
  const Field div_vt = divergence(vt);

  const Field& a = x.eta;
  const VectorField& w = x.v;
  const Field& t = x.theta;
  const Field& b = y.eta;
  const VectorField& z = y.v;
  const Field& s = y.theta;
  const Field b_plus_s = b + s;
  const Field div_w = divergence(w);
  const Field div_z = divergence(z);
  const Field a_tt = dealiased_product(a, tt);

  BilinearTerms B;
  B.regularization = delta * grad_inner(a, b);
  B.advection = -inner(advect(U, b), a) - inner(advect(U, z), w) - inner(advect(U, s), t) - inner(advect(vt, b), a);
  B.principal = inner(a + t, b_plus_s) + p.mu * grad_inner(w, z) + p.zeta() * inner(div_w, div_z) +
                p.kappa * grad_inner(t, s);

  const VectorField a_f = dealiased_product(a, c.f);
  const VectorField a_uu = dealiased_product(a, u_adv_u);
  const Field pressure_row = eps * a_tt + eps * inv_lap_div(advect(U, w)) - eps * (p.mu + p.zeta()) * div_w -
                             eps * eps * inv_lap_div(a_f) + eps * eps * inv_lap_div(a_uu);
  B.pressure_row = inner(pressure_row, b_plus_s);

  B.momentum_row = inner(eps * a_uu - eps * a_f, z) - inner(a_tt, div_z);

  const Field energy_row = eps * dealiased_product(a, advect(u, tt)) -
                           eps * dealiased_product(a, dealiased_product(tt, div_vt)) + dealiased_product(a, div_vt);
  B.energy_row = inner(energy_row, s);

  B.singular = (inner(div_w, b) - inner(div_z, a + t) + inner(div_w, s)) / eps;
  return B;
}

double bilinear_form_B(const Perturbation& x, const Perturbation& y, const LinearizedCoefficients& c,
                       const FluidParams& p, double delta) {
  return bilinear_terms(x, y, c, p, delta).total();
}

EnergyDiagnostics energy_diagnostics(const Perturbation& x, const LinearizedCoefficients& c, const FluidParams& p,
                                     double delta) {
  EnergyDiagnostics d;
  d.B_quadratic = bilinear_form_B(x, x, c, p, delta);
  const double e0 = sobolev_norm(x.eta, 0), v1 = sobolev_norm(x.v, 1), t1 = sobolev_norm(x.theta, 1);
  d.lower_bound_norms = e0 * e0 + v1 * v1 + t1 * t1;
  d.coercivity_ratio = d.lower_bound_norms > 0.0 ? d.B_quadratic / d.lower_bound_norms : 0.0;
  d.skew_residual = skew_identity_check(x.eta, x.theta, x.v);
  return d;
}

CoercivitySummary coercivity_probe(const LinearizedCoefficients& c, const FluidParams& p, double delta, int trials,
                                   std::mt19937_64& rng, int max_k) {
  CoercivitySummary summary;
  summary.trials = trials;
  summary.min_ratio = std::numeric_limits<double>::infinity();
  summary.max_ratio = -std::numeric_limits<double>::infinity();
  const Grid& g = c.grid();
  for (int trial = 0; trial < trials; ++trial) {
    Perturbation x{random_field(g, rng, max_k), random_vector_field(g, rng, max_k), random_field(g, rng, max_k)};
    const EnergyDiagnostics d = energy_diagnostics(x, c, p, delta);
    summary.max_ratio = std::max(summary.max_ratio, d.coercivity_ratio);
    if (d.coercivity_ratio < summary.min_ratio) {
      summary.min_ratio = d.coercivity_ratio;
      summary.worst = d;
    }
  }
  if (trials == 0) summary.min_ratio = summary.max_ratio = 0.0;
  return summary;
}

double skew_identity_check(const Field& eta, const Field& theta, const VectorField& v) {
  const Field s = eta + theta;
  return std::abs(inner(s, divergence(v)) + inner(v, gradient(s)));
}

}  // namespace lowmach
