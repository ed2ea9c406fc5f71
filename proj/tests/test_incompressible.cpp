#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lowmach/errors.hpp"
#include "lowmach/incompressible.hpp"

using namespace lowmach;

namespace {

const Grid g32(32);

VectorField smooth_forcing(const Grid& g) {
  return VectorField(Field::sample(g, [](double x, double y) { return std::sin(2 * y) + 0.3 * std::cos(x + y); }),
                     Field::sample(g, [](double x, double) { return 0.5 * std::sin(x); }));
}

}  // namespace

TEST_CASE("Stokes mode solve examples") {
  const double mu = 1.3;
  VectorField h(g32);
  h[0] = Field::sample(g32, [](double, double y) { return std::sin(y); });
  auto [U, P] = stokes_mode_solve(h, mu);
  CHECK(max_abs_coeff_diff(U, h / mu) <= 1e-16);
  CHECK(sobolev_norm(P, 0) == 0.0);

  const Field phi = Field::sample(g32, [](double x, double y) { return std::cos(x + 2 * y) - std::sin(3 * y); });
  std::tie(U, P) = stokes_mode_solve(gradient(phi), mu);
  CHECK(sobolev_norm(U, 0) <= 1e-16);
  CHECK(max_abs_coeff_diff(P, phi) <= 1e-15);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const VectorField r = random_vector_field(g32, rng, 15);
    std::tie(U, P) = stokes_mode_solve(r, mu);
    CHECK(sobolev_norm(mean_zero_project(-mu * laplacian(U) + gradient(P) - r), 0) <= 1e-12);
    CHECK(sobolev_norm(divergence(U), 0) <= 1e-12);
    CHECK(P.mean() == 0.0);
    CHECK(U[0].mean() == 0.0);
  }
}

TEST_CASE("advected Stokes examples") {
  const double mu = 1.0;
  const VectorField U = testing::taylor_green(g32);
  const Field P = testing::taylor_green_pressure(g32);
  const VectorField h = -mu * laplacian(U) + gradient(P);

  const StokesSolution s = solve_advected_stokes(VectorField(g32), h, mu);
  CHECK(s.picard_iters == 1);
  CHECK(sobolev_norm(s.U - U, 2) <= 1e-10);

  const StokesSolution zero = solve_advected_stokes(U, VectorField(g32), mu);
  CHECK(sobolev_norm(zero.U, 0) == 0.0);
  CHECK(sobolev_norm(zero.P, 0) == 0.0);
}

TEST_CASE("advected Stokes with a small advecting field") {
  const double mu = 1.0;
  std::mt19937_64 rng(2);
  VectorField a = leray_project(random_vector_field(g32, rng, 4));
  a *= 0.3 / sobolev_norm(a, 3);
  const VectorField h = smooth_forcing(g32);
  PicardOptions o;
  o.tol = 1e-12;
  const StokesSolution s = solve_advected_stokes(a, h, mu, o);
  CHECK(s.picard_iters > 1);
  CHECK(s.residual <= 10 * o.tol);
  CHECK(sobolev_norm(divergence(s.U), 0) <= 1e-12);
  const VectorField direct = mean_zero_project(advect(a, s.U) - mu * laplacian(s.U) + gradient(s.P) - h);
  CHECK(sobolev_norm(direct, 0) <= 10 * o.tol);
}

TEST_CASE("advected Stokes reports divergence of the Picard iteration") {
  const VectorField a = 40.0 * testing::taylor_green(g32);
  PicardOptions o;
  o.max_iter = 5;
  CHECK_THROWS_AS(solve_advected_stokes(a, smooth_forcing(g32), 0.5, o), NoConvergence);
  try {
    solve_advected_stokes(a, smooth_forcing(g32), 0.5, o);
  } catch (const NoConvergence& e) {
    CHECK(e.iterations() == 5);
    CHECK(e.last_update() > 0.0);
  }
}

TEST_CASE("Stokes solve is linear when a = 0") {
  std::mt19937_64 rng(3);
  const VectorField h1 = random_vector_field(g32, rng, 10), h2 = random_vector_field(g32, rng, 10);
  const VectorField a(g32);
  const StokesSolution s1 = solve_advected_stokes(a, h1, 0.8), s2 = solve_advected_stokes(a, h2, 0.8);
  const StokesSolution s12 = solve_advected_stokes(a, h1 + h2, 0.8);
  CHECK(max_abs_coeff_diff(s12.U, s1.U + s2.U) <= 1e-12);
  CHECK(max_abs_coeff_diff(s12.P, s1.P + s2.P) <= 1e-12);
}

TEST_CASE("advection by a solenoidal field is energy neutral") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    const VectorField a = leray_project(random_vector_field(g32, rng, 5));
    const VectorField U = random_vector_field(g32, rng, 5);
    CHECK(std::abs(inner(advect(a, U), U)) <= 1e-11);
  }
}

TEST_CASE("incompressible Navier-Stokes examples") {
  const double mu = 1.0;
  const StokesSolution z = solve_incompressible_ns(VectorField(g32), VectorField(g32), VectorField(g32), mu);
  CHECK(sobolev_norm(z.U, 0) == 0.0);

  const VectorField U = testing::taylor_green(g32);
  const Field P = testing::taylor_green_pressure(g32);
  const VectorField h = mms_forcing(U, P, mu);
  PicardOptions o;
  const StokesSolution s = solve_incompressible_ns(h, VectorField(g32), VectorField(g32), mu, o);
  CHECK(s.residual <= 1e-10);
  CHECK(sobolev_norm(s.U - U, 2) <= 1e-8);
  CHECK(sobolev_norm(s.P - P, 1) <= 1e-8);

  const Field phi = Field::sample(g32, [](double x, double y) { return std::sin(x) * std::sin(y) + 1.0; });
  const StokesSolution pot = solve_incompressible_ns(gradient(phi), VectorField(g32), VectorField(g32), mu);
  CHECK(sobolev_norm(pot.U, 0) <= 1e-15);
  CHECK(max_abs_coeff_diff(pot.P, mean_zero_project(phi)) <= 1e-15);
}

TEST_CASE("incompressible solve with an extra advecting field") {
  std::mt19937_64 rng(5);
  VectorField v = random_vector_field(g32, rng, 3);
  v *= 0.1 / sobolev_norm(v, 3);
  const VectorField f = smooth_forcing(g32);
  PicardOptions o;
  const StokesSolution s = solve_incompressible_ns(f, VectorField(g32), v, 1.0, o);
  CHECK(s.residual <= 10 * o.tol);
  CHECK(residual_incompressible(s.U, s.P, f, VectorField(g32), 1.0, &v).total <= 10 * o.tol);
}

TEST_CASE("K0 report") {
  const K0Report z = k0_report(VectorField(g32), Field(g32), smooth_forcing(g32));
  for (double r : z.ratios) CHECK(r == 0.0);

  const StokesSolution s32 = solve_incompressible_ns(smooth_forcing(g32), VectorField(g32), VectorField(g32), 1.0);
  const Grid g64(64);
  const StokesSolution s64 = solve_incompressible_ns(smooth_forcing(g64), VectorField(g64), VectorField(g64), 1.0);
  const K0Report r32 = k0_report(s32.U, s32.P, smooth_forcing(g32));
  const K0Report r64 = k0_report(s64.U, s64.P, smooth_forcing(g64));
  for (int m = 0; m < 4; ++m) {
    CHECK(r32.ratios[m] > 0.0);
    CHECK(std::abs(r32.ratios[m] - r64.ratios[m]) <= 0.01 * r64.ratios[m]);
  }

  const VectorField h = smooth_forcing(g32);
  const StokesSolution a = solve_advected_stokes(VectorField(g32), h, 1.0);
  const StokesSolution b = solve_advected_stokes(VectorField(g32), 0.5 * h, 1.0);
  const K0Report ka = k0_report(a.U, a.P, h), kb = k0_report(b.U, b.P, 0.5 * h);
  for (int m = 0; m < 4; ++m) CHECK(kb.U_norms[m] == doctest::Approx(0.5 * ka.U_norms[m]).epsilon(1e-14));
}
