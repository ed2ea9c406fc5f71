#include "lowmach/checks.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include <Eigen/Dense>

#include "lowmach/errors.hpp"

namespace lowmach {

namespace {

using ComplexL = std::complex<long double>;

std::string sci(const char* label, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.3e", label, v);
  return buf;
}

/// Copies the resolved, non-Nyquist coefficients of f onto `target`.
Field regrid(const Field& f, const Grid& target) {
  const Grid& src = f.grid();
  const int half = std::min(src.n(), target.n()) / 2;
  Field out(target);
  for (int kx = -half + 1; kx < half; ++kx)
    for (int ky = -half + 1; ky < half; ++ky) out.coeffs()(target.index(kx), target.index(ky)) = f.coeff(kx, ky);
  return out;
}

}  // namespace

Field padded_product(const Field& a, const Field& b) {
  const Grid& g = a.grid();
  const Grid fine(2 * g.n(), 1.0);
  const Field af = regrid(truncate(a), fine), bf = regrid(truncate(b), fine);
  const PhysArray prod = af.to_physical() * bf.to_physical();
  return truncate(regrid(Field::from_physical(fine, prod), g));
}

std::array<Complex, 4> dense_symbol_solve(double kx, double ky, const std::array<Complex, 4>& rhs,
                                          const FluidParams& p, double delta) {
  const long double ie = 1.0L / p.eps, mu = p.mu, zeta = p.zeta(), kappa = p.kappa;
  const long double x = kx, y = ky, k2 = x * x + y * y;
  const ComplexL I(0.0L, 1.0L);
  Eigen::Matrix<ComplexL, 4, 4> A;
  A << delta * k2, I * x * ie, I * y * ie, 0.0L,
       I * x * ie, mu * k2 + zeta * x * x, zeta * x * y, I * x * ie,
       I * y * ie, zeta * x * y, mu * k2 + zeta * y * y, I * y * ie,
       0.0L, I * x * ie, I * y * ie, kappa * k2;
  Eigen::Matrix<ComplexL, 4, 1> b;
  for (int q = 0; q < 4; ++q) b(q) = ComplexL(rhs[q].real(), rhs[q].imag());
  const Eigen::Matrix<ComplexL, 4, 1> sol = A.fullPivLu().solve(b);
  std::array<Complex, 4> out;
  for (int q = 0; q < 4; ++q)
    out[q] = Complex(static_cast<double>(sol(q).real()), static_cast<double>(sol(q).imag()));
  return out;
}

MmsResult run_mms(const std::string& name, const Grid& grid, double mu, const PicardOptions& opts) {
  MmsResult r;
  r.name = name;
  if (name == "taylor_green") {
    const VectorField Us = taylor_green_forcing(grid, 1.0);
    const Field Ps = Field::sample(grid, [](double x, double y) { return 0.25 * (std::cos(2 * x) + std::cos(2 * y)); });
    const VectorField h = mms_forcing(Us, Ps, mu);
    const StokesSolution s = solve_incompressible_ns(h, VectorField(grid), VectorField(grid), mu, opts);
    r.rows = {{"U_error_H2", sobolev_norm(s.U - Us, 2), 1e-10},
              {"P_error_H1", sobolev_norm(s.P - Ps, 1), 0.0},
              {"residual", s.residual, 0.0}};
  } else if (name == "gradient_force") {
    const Field phi =
        Field::sample(grid, [](double x, double y) { return std::cos(x + 2 * y) + 0.5 * std::sin(3 * x); });
    const StokesSolution s = solve_incompressible_ns(gradient(phi), VectorField(grid), VectorField(grid), mu, opts);
    r.rows = {{"U_error_H2", sobolev_norm(s.U, 2), 1e-12}, {"P_error_H1", sobolev_norm(s.P - phi, 1), 0.0}};
  } else if (name == "stokes_shear") {
    VectorField h(grid);
    h[0] = Field::sample(grid, [](double, double y) { return std::sin(y); });
    const StokesSolution s = solve_advected_stokes(VectorField(grid), h, mu, opts);
    r.rows = {{"U_error_H2", sobolev_norm(s.U - h / mu, 2), 1e-12}, {"P_error_H1", sobolev_norm(s.P, 1), 0.0}};
  } else {
    throw InvalidParameter("mms: unknown case '" + name + "'");
  }
  r.passed = true;
  for (const auto& row : r.rows)
    if (row.threshold > 0.0 && !(row.value <= row.threshold)) r.passed = false;
  return r;
}

std::vector<CheckResult> run_checks(const RunConfig& cfg) {
  cfg.validate();
  const Grid grid = cfg.grid();
  const FluidParams p = cfg.params();
  const int trials = cfg.trials;
  const int n = grid.n();
  const int band = std::max(1, static_cast<int>(std::ceil(grid.dealias_fraction() * n / 2.0)) - 1);
  std::mt19937_64 rng(cfg.seed);
  std::vector<CheckResult> out;
  auto add = [&](const char* module, const char* name, bool ok, std::string detail) {
    out.push_back({module, name, ok, std::move(detail)});
  };

  // spectral
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field f = random_field(grid, rng, n / 2 - 1, true);
      worst = std::max(worst, max_abs_coeff_diff(Field::from_physical(grid, f.to_physical()), f));
    }
    add("spectral", "transform round trip <= 1e-13", worst <= 1e-13, sci("max diff", worst));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field f = random_field(grid, rng, n / 2 - 1);
      const PhysArray v = f.to_physical();
      const double ms = v.square().mean();
      const double s0 = sobolev_norm(f, 0);
      worst = std::max(worst, std::abs(ms - s0 * s0) / std::max(ms, 1e-300));
    }
    add("spectral", "Parseval mean square <= 1e-12 relative", worst <= 1e-12, sci("max rel diff", worst));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field f = random_field(grid, rng, n / 2 - 1);
      worst = std::max(worst, max_abs_coeff_diff(divergence(gradient(f)), laplacian(f)));
    }
    add("spectral", "div grad = Laplacian", worst <= 1e-12, sci("max diff", worst));
  }
  {
    double worst = 0.0, scale = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field a = random_field(grid, rng, n / 2 - 1), b = random_field(grid, rng, n / 2 - 1);
      const Field exact = padded_product(a, b);
      worst = std::max(worst, max_abs_coeff_diff(dealiased_product(a, b), exact));
      scale = std::max(scale, exact.coeffs().abs().maxCoeff());
    }
    add("spectral", "dealiased product is alias-free", worst <= 1e-12 * std::max(scale, 1.0),
        sci("max diff", worst));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field a = random_field(grid, rng, n / 2 - 1), b = random_field(grid, rng, n / 2 - 1);
      worst = std::max(worst, dealiased_product(a, b).hermitian_defect());
    }
    add("spectral", "products stay Hermitian", worst <= 1e-13, sci("max defect", worst));
  }
  {
    double div = 0.0, idem = 0.0;
    for (int t = 0; t < trials; ++t) {
      const VectorField v = random_vector_field(grid, rng, n / 2 - 1);
      const VectorField w = leray_project(v);
      div = std::max(div, sobolev_norm(divergence(w), 0));
      idem = std::max(idem, max_abs_coeff_diff(leray_project(w), w));
    }
    add("spectral", "Leray projection solenoidal and idempotent", div <= 1e-12 && idem <= 1e-14,
        sci("div", div) + ", " + sci("idempotence", idem));
  }

  // fields
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      SplitState s{random_vector_field(grid, rng, band), random_field(grid, rng, band),
                   random_vector_field(grid, rng, band), random_field(grid, rng, band),
                   random_field(grid, rng, band)};
      const SplitState back = decompose(compose(s, p), s.U, s.P, p);
      worst = std::max({worst, max_abs_coeff_diff(back.v, s.v), max_abs_coeff_diff(back.eta, s.eta),
                        max_abs_coeff_diff(back.theta, s.theta)});
    }
    add("fields", "compose/decompose round trip", worst <= 1e-14, sci("max diff", worst));
  }
  {
    bool ok = true;
    for (int t = 0; t < trials; ++t) {
      const VectorField u = random_vector_field(grid, rng, band);
      ok = ok && dissipation(u, p).mean() >= 0.0;
    }
    add("fields", "viscous heating has nonnegative mean", ok, "");
  }

  // incompressible
  for (const char* name : {"taylor_green", "gradient_force", "stokes_shear"}) {
    const MmsResult m = run_mms(name, grid, p.mu, PicardOptions{});
    add("incompressible", (std::string("mms ") + name).c_str(), m.passed, sci("U error", m.rows[0].value));
  }
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const VectorField h = random_vector_field(grid, rng, band);
      const auto [U, P] = stokes_mode_solve(h, p.mu);
      const VectorField r = mean_zero_project(-p.mu * laplacian(U) + gradient(P) - h);
      worst = std::max({worst, sobolev_norm(r, 0), sobolev_norm(divergence(U), 0)});
    }
    add("incompressible", "Stokes mode solve exact", worst <= 1e-12, sci("max residual", worst));
  }

  // compressible
  {
    double worst = 0.0;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (double eps : {1.0, 0.1, 0.01, 0.001}) {
      FluidParams q = p;
      q.eps = eps;
      for (int t = 0; t < trials; ++t) {
        int kx = 0, ky = 0;
        while (kx == 0 && ky == 0) {
          kx = static_cast<int>(rng() % (n - 1)) - (n / 2 - 1);
          ky = static_cast<int>(rng() % (n - 1)) - (n / 2 - 1);
        }
        std::array<Complex, 4> r;
        for (auto& c : r) c = Complex(unif(rng), unif(rng));
        const auto a = principal_symbol_solve(kx, ky, r, q, 0.0);
        const auto b = dense_symbol_solve(kx, ky, r, q, 0.0);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 4; ++i) {
          num += std::norm(a[i] - b[i]);
          den += std::norm(b[i]);
        }
        worst = std::max(worst, std::sqrt(num / den));
      }
    }
    add("compressible", "per-mode solve matches dense symbol", worst <= 1e-12, sci("max rel diff", worst));
  }
  FluidParams p05 = p;
  p05.eps = 0.05;
  const auto [f_tg, g_tg] = cfg.forcing_fields(grid);
  const StokesSolution base = solve_incompressible_ns(f_tg, g_tg, VectorField(grid), p05.mu);
  {
    VectorField vt = random_vector_field(grid, rng, 3);
    Field tt = random_field(grid, rng, 3);
    vt *= 0.05 / sobolev_norm(vt, 3);
    tt *= 0.05 / sobolev_norm(tt, 3);
    LinearizedCoefficients c{base.U, base.P, vt, tt, f_tg};
    LinearizedOptions lo;
    lo.max_iter = cfg.max_inner;
    const LinearizedSolution s1 = solve_linearized(c, p05, lo);
    const Perturbation init{random_field(grid, rng, band), random_vector_field(grid, rng, band),
                            random_field(grid, rng, band)};
    const LinearizedSolution s2 = solve_linearized(c, p05, lo, &init);
    const double gap = sobolev_norm(s1.eta - s2.eta, 1) + sobolev_norm(s1.v - s2.v, 1) +
                       sobolev_norm(s1.theta - s2.theta, 1);
    add("compressible", "linearized residual <= 1e-9", s1.residual <= 1e-9, sci("residual", s1.residual));
    add("compressible", "two initial guesses agree <= 1e-9", gap <= 1e-9, sci("H1 gap", gap));
  }

  // energy
  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Field eta = random_field(grid, rng, band), theta = random_field(grid, rng, band);
      const VectorField v = random_vector_field(grid, rng, band);
      const double scale = std::abs(inner(eta + theta, divergence(v))) + 1e-300;
      worst = std::max(worst, skew_identity_check(eta, theta, v) / scale);
    }
    add("energy", "transport skew identity", worst <= 1e-12, sci("max rel", worst));
  }
  {
    const LinearizedCoefficients zero = LinearizedCoefficients::zero(grid);
    const CoercivitySummary s = coercivity_probe(zero, p, 0.0, trials, rng, band);
    add("energy", "coercivity with zero coefficients", s.min_ratio > 0.0, sci("min ratio", s.min_ratio));
    LinearizedCoefficients c{base.U, base.P, VectorField(grid), Field(grid), f_tg};
    const CoercivitySummary s2 = coercivity_probe(c, p05, 0.0, trials, rng, band);
    add("energy", "coercivity around Taylor-Green base flow", s2.min_ratio > 0.0, sci("min ratio", s2.min_ratio));
  }

  // fixedpoint
  {
    FixedPointOptions o = cfg.solver_options();
    o.probe_trials = 0;
    const SolveReport a = fixed_point_solve(f_tg, g_tg, p05, o);
    const SolveReport b = fixed_point_solve(f_tg, g_tg, p05, o);
    bool means = true;
    means = std::abs(a.state.P.mean()) <= 1e-13 && std::abs(a.state.eta.mean()) <= 1e-13;
    add("fixedpoint", "solve converges", a.converged, a.failure.empty() ? sci("residual", a.residual_transformed)
                                                                         : a.failure);
    add("fixedpoint", "transformed and primitive residuals agree",
        a.residual_transformed <= 10 * o.tol && a.residual_primitive <= 10 * o.tol * (1 + p05.eps),
        sci("primitive", a.residual_primitive));
    add("fixedpoint", "mean(P) = mean(eta) = 0", means, "");
    add("fixedpoint", "final perturbation within E", a.final_norm <= o.E, sci("norm", a.final_norm));
    add("fixedpoint", "contraction geometric", a.contraction.geometric, "");
    add("fixedpoint", "deterministic", a.residual_transformed == b.residual_transformed && a.final_norm == b.final_norm,
        "");
  }

  // sweep
  {
    const std::vector<double> e{0.1, 0.05, 0.025, 0.0125};
    std::vector<double> lin, cst;
    for (double x : e) {
      lin.push_back(3.0 * x);
      cst.push_back(2.0);
    }
    const double s1 = fit_rate(e, lin).slope, s0 = fit_rate(e, cst).slope;
    add("sweep", "rate fit recovers exact slopes", std::abs(s1 - 1.0) <= 1e-12 && std::abs(s0) <= 1e-12,
        sci("slope", s1));
  }

  // cli
  {
    const RunConfig again = parse_config(serialize_config(cfg));
    add("cli", "config round trip", again == cfg, "");
  }
  return out;
}

}  // namespace lowmach
