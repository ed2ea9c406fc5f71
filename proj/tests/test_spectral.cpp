#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lowmach/errors.hpp"
#include "lowmach/spectral.hpp"
#include "oracles.hpp"

using namespace lowmach;

namespace {

const Grid g32(32);

Field sinx() { return Field::sample(g32, [](double x, double) { return std::sin(x); }); }
Field cosx() { return Field::sample(g32, [](double x, double) { return std::cos(x); }); }

// sin x set coefficient by coefficient, free of transform round-off
Field exact_sinx() {
  Field f(g32);
  f.coeffs()(g32.index(1), 0) = Complex(0.0, -0.5);
  f.coeffs()(g32.index(-1), 0) = Complex(0.0, 0.5);
  return f;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(6), InvalidParameter);
  CHECK_THROWS_AS(Grid(33), InvalidParameter);
  CHECK_THROWS_AS(Grid(32, 0.0), InvalidParameter);
  CHECK_THROWS_AS(Grid(32, 1.5), InvalidParameter);
  CHECK_NOTHROW(Grid(8, 1.0));
  CHECK(g32.wavenumber(16) == 16);
  CHECK(g32.wavenumber(17) == -15);
  CHECK(g32.index(-1) == 31);
}

TEST_CASE("band of the two-thirds rule at n = 32") {
  CHECK(g32.resolved(g32.index(10)));
  CHECK(g32.resolved(g32.index(-10)));
  CHECK_FALSE(g32.resolved(g32.index(11)));
  CHECK_FALSE(g32.resolved(g32.index(16)));
  const Grid full(32, 1.0);
  CHECK(full.resolved(full.index(15)));
  CHECK_FALSE(full.resolved(full.index(16)));
}

TEST_CASE("derivative examples") {
  CHECK(max_abs_coeff_diff(derivative(sinx(), 0), cosx()) < 1e-15);
  CHECK(max_abs_coeff_diff(derivative(Field::constant(g32, 3.0), 0), Field(g32)) == 0.0);
  CHECK(derivative(sinx(), 1).coeffs().abs().maxCoeff() == 0.0);
}

TEST_CASE("derivative matches finite differences on a 4096-point line") {
  auto f = [](double x, double y) { return std::exp(0.5 * std::sin(x)) * (1.0 + 0.2 * std::cos(y)); };
  const Field F = Field::sample(g32, f);
  const oracle::Trig dF(derivative(F, 0));
  const int M = 4096;
  const double h = oracle::kTwoPi / M, y0 = 0.7;
  double worst = 0.0;
  for (int i = 0; i < M; i += 7) {
    const double x = i * h;
    const double fd = (f(x + h, y0) - f(x - h, y0)) / (2 * h);
    worst = std::max(worst, std::abs(dF.eval(x, y0) - fd));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("gradient, divergence and Laplacian") {
  const VectorField shear(Field::sample(g32, [](double, double y) { return std::sin(y); }), Field(g32));
  CHECK(sobolev_norm(divergence(shear), 0) == 0.0);
  CHECK(max_abs_coeff_diff(laplacian(exact_sinx()), -1.0 * exact_sinx()) == 0.0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Field f = random_field(g32, rng, 15);
    CHECK(max_abs_coeff_diff(divergence(gradient(f)), laplacian(f)) <= 1e-14);
  }
}

TEST_CASE("inverse Laplacian") {
  CHECK(max_abs_coeff_diff(inverse_laplacian(sinx()), -1.0 * sinx()) < 1e-15);
  CHECK(inverse_laplacian(Field(g32)).coeffs().abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(inverse_laplacian(sinx() + 1.0), NonZeroMean);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const Field f = random_field(g32, rng, 15);
    CHECK(max_abs_coeff_diff(laplacian(inverse_laplacian(f)), f) <= 1e-13);
    CHECK(inverse_laplacian(f).mean() == 0.0);
  }
}

TEST_CASE("dealiased product examples") {
  std::mt19937_64 rng(13);
  const Field b = random_field(g32, rng, 15);
  CHECK(max_abs_coeff_diff(dealiased_product(Field::constant(g32, 1.0), b), truncate(b)) < 1e-15);

  const Field s2 = dealiased_product(sinx(), sinx());
  const Field expect = Field::sample(g32, [](double x, double) { return 0.5 - 0.5 * std::cos(2 * x); });
  CHECK(max_abs_coeff_diff(s2, expect) < 1e-15);
}

TEST_CASE("dealiased product matches oversampled quadrature of the pointwise product") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 5; ++t) {
    const Field a = random_field(g32, rng, 5), b = random_field(g32, rng, 5);
    const int M = 3 * 16;
    const Field exact = oracle::project(oracle::values(a, M) * oracle::values(b, M), g32);
    CHECK(max_abs_coeff_diff(dealiased_product(a, b), exact) <= 1e-12);
  }
}

TEST_CASE("dealiased product is bilinear and symmetric") {
  std::mt19937_64 rng(15);
  const Field a = random_field(g32, rng, 15), b = random_field(g32, rng, 15), c = random_field(g32, rng, 15);
  CHECK(max_abs_coeff_diff(dealiased_product(a, b), dealiased_product(b, a)) <= 1e-15);
  const Field lhs = dealiased_product(2.0 * a + c, b);
  const Field rhs = 2.0 * dealiased_product(a, b) + dealiased_product(c, b);
  CHECK(max_abs_coeff_diff(lhs, rhs) <= 1e-14);
}

TEST_CASE("Sobolev norms of sin x against quadrature") {
  const int M = 1000;  // 1e6 points
  double ms = 0.0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double s = std::sin(oracle::kTwoPi * i / M);
      ms += s * s;
    }
  ms /= double(M) * M;
  CHECK(sobolev_norm(sinx(), 0) == doctest::Approx(std::sqrt(ms)).epsilon(1e-13));
  CHECK(sobolev_norm(sinx(), 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sobolev_norm(sinx(), 1) == doctest::Approx(1.0).epsilon(1e-14));
  for (int m = -1; m <= 4; ++m) CHECK(sobolev_norm(Field(g32), m) == 0.0);
  CHECK_THROWS_AS(sobolev_norm(sinx(), 5), InvalidParameter);
  CHECK_THROWS_AS(sobolev_norm(sinx(), -2), InvalidParameter);
}

TEST_CASE("Sobolev norm is monotone in m") {
  std::mt19937_64 rng(16);
  const Field f = random_field(g32, rng, 15, true);
  for (int m = 0; m < 4; ++m) CHECK(sobolev_norm(f, m) <= sobolev_norm(f, m + 1));
}

TEST_CASE("mean-zero projection") {
  const Field f = mean_zero_project(sinx() + 3.0);
  CHECK(max_abs_coeff_diff(f, sinx()) < 1e-15);
  CHECK(max_abs_coeff_diff(mean_zero_project(exact_sinx()), exact_sinx()) == 0.0);
  std::mt19937_64 rng(17);
  const Field r = random_field(g32, rng, 15, true);
  CHECK(max_abs_coeff_diff(mean_zero_project(mean_zero_project(r)), mean_zero_project(r)) == 0.0);
}

TEST_CASE("Parseval against direct evaluation") {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 5; ++t) {
    const Field f = random_field(g32, rng, 15, true);
    const double quad = oracle::values(f, 32).square().mean();
    const double s0 = sobolev_norm(f, 0);
    CHECK(std::abs(s0 * s0 - quad) <= 1e-12 * quad);
  }
}

TEST_CASE("transform round trip") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 10; ++t) {
    const Field f = random_field(g32, rng, 15, true);
    const PhysArray v = f.to_physical();
    const PhysArray back = Field::from_physical(g32, v).to_physical();
    CHECK((back - v).abs().maxCoeff() <= 1e-13 * v.abs().maxCoeff());
    // physical values agree with the direct trigonometric sum
    CHECK((oracle::values(f, 32) - v).abs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("derivative commutes with mean-zero projection") {
  std::mt19937_64 rng(20);
  const Field f = random_field(g32, rng, 15, true);
  CHECK(max_abs_coeff_diff(derivative(mean_zero_project(f), 0), mean_zero_project(derivative(f, 0))) == 0.0);
}

TEST_CASE("Hermitian symmetry and set_mode") {
  Field f(g32);
  f.set_mode(2, -3, Complex(0.5, 0.25));
  CHECK(f.coeff(-2, 3) == Complex(0.5, -0.25));
  CHECK(f.hermitian_defect() == 0.0);
  CHECK(f.to_physical().allFinite());
  std::mt19937_64 rng(21);
  const Field a = random_field(g32, rng, 15), b = random_field(g32, rng, 15);
  CHECK(dealiased_product(a, b).hermitian_defect() <= 1e-15);
}

TEST_CASE("Leray projection") {
  std::mt19937_64 rng(22);
  const VectorField v = random_vector_field(g32, rng, 15);
  const VectorField w = leray_project(v);
  CHECK(sobolev_norm(divergence(w), 0) <= 1e-14);
  CHECK(max_abs_coeff_diff(leray_project(w), w) <= 1e-15);
  const Field phi = random_field(g32, rng, 15);
  CHECK(sobolev_norm(leray_project(gradient(phi)), 0) <= 1e-14);
}
