// Reference evaluations that avoid the library's transforms and solvers:
// direct trigonometric sums, direct DFT projection on an oversampled grid,
// and Gaussian elimination in extended precision.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Core>

#include "lowmach/spectral.hpp"

namespace oracle {

using lowmach::Complex;
using lowmach::Field;
using lowmach::Grid;
using Values = Eigen::ArrayXXd;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Nonzero Fourier modes of a field, Nyquist excluded.
struct Trig {
  struct Mode {
    int kx, ky;
    Complex c;
  };
  std::vector<Mode> modes;

  explicit Trig(const Field& f) {
    const int h = f.grid().n() / 2;
    for (int kx = -h + 1; kx < h; ++kx)
      for (int ky = -h + 1; ky < h; ++ky) {
        const Complex c = f.coeff(kx, ky);
        if (std::abs(c) > 0.0) modes.push_back({kx, ky, c});
      }
  }

  /// d^(ax) / dx^(ax) d^(ay) / dy^(ay) of the sum at (x, y).
  double eval(double x, double y, int ax = 0, int ay = 0) const {
    std::complex<long double> s = 0.0L;
    for (const auto& m : modes) {
      std::complex<long double> d(1.0L, 0.0L);
      for (int i = 0; i < ax; ++i) d *= std::complex<long double>(0.0L, m.kx);
      for (int i = 0; i < ay; ++i) d *= std::complex<long double>(0.0L, m.ky);
      const long double ph = static_cast<long double>(m.kx) * x + static_cast<long double>(m.ky) * y;
      s += d * std::complex<long double>(m.c.real(), m.c.imag()) * std::complex<long double>(std::cos(ph), std::sin(ph));
    }
    return static_cast<double>(s.real());
  }

  /// Same sums on the uniform M x M grid, with the phase split into per-axis
  /// tables exp(i k x_i) exp(i k y_j).
  Values values(int M, int ax = 0, int ay = 0) const {
    using C = std::complex<long double>;
    auto table = [M](int k) {
      std::vector<C> t(M);
      for (int i = 0; i < M; ++i) {
        const long double ph = static_cast<long double>(k) * kTwoPi * i / M;
        t[i] = C(std::cos(ph), std::sin(ph));
      }
      return t;
    };
    Eigen::Array<long double, Eigen::Dynamic, Eigen::Dynamic> acc =
        Eigen::Array<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(M, M);
    for (const auto& m : modes) {
      C d(m.c.real(), m.c.imag());
      for (int i = 0; i < ax; ++i) d *= C(0.0L, m.kx);
      for (int i = 0; i < ay; ++i) d *= C(0.0L, m.ky);
      const std::vector<C> ex = table(m.kx), ey = table(m.ky);
      for (int i = 0; i < M; ++i) {
        const C di = d * ex[i];
        for (int j = 0; j < M; ++j) acc(i, j) += (di * ey[j]).real();
      }
    }
    return acc.cast<double>();
  }
};

inline Values values(const Field& f, int M, int ax = 0, int ay = 0) { return Trig(f).values(M, ax, ay); }

/// Mean over an M x M uniform grid.
inline double mean(const Values& v) { return v.mean(); }

/// Fourier coefficients of sampled values by direct DFT, kept only inside the
/// dealiasing band of `grid`.
inline Field project(const Values& v, const Grid& grid) {
  const int M = static_cast<int>(v.rows());
  const int h = grid.n() / 2;
  Field out(grid);
  for (int kx = -h + 1; kx < h; ++kx)
    for (int ky = -h + 1; ky < h; ++ky) {
      if (!grid.resolved(grid.index(kx)) || !grid.resolved(grid.index(ky))) continue;
      std::complex<long double> s = 0.0L;
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
          const long double ph = -kTwoPi * (static_cast<long double>(kx) * i + static_cast<long double>(ky) * j) / M;
          s += static_cast<long double>(v(i, j)) * std::complex<long double>(std::cos(ph), std::sin(ph));
        }
      s /= static_cast<long double>(M) * M;
      out.coeffs()(grid.index(kx), grid.index(ky)) =
          Complex(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
  return out;
}

/// Dense solve of the principal symbol by Gaussian elimination with partial
/// pivoting in long double. Unknown order (eta, v_x, v_y, theta).
inline std::array<Complex, 4> symbol_solve(double kx, double ky, const std::array<Complex, 4>& rhs, double mu,
                                           double zeta, double kappa, double eps, double delta) {
  using C = std::complex<long double>;
  const long double x = kx, y = ky, k2 = x * x + y * y, ie = 1.0L / static_cast<long double>(eps);
  const C I(0.0L, 1.0L);
  C A[4][5] = {{delta * k2, I * x * ie, I * y * ie, 0.0L, 0.0L},
               {I * x * ie, mu * k2 + zeta * x * x, zeta * x * y, I * x * ie, 0.0L},
               {I * y * ie, zeta * x * y, mu * k2 + zeta * y * y, I * y * ie, 0.0L},
               {0.0L, I * x * ie, I * y * ie, kappa * k2, 0.0L}};
  for (int r = 0; r < 4; ++r) A[r][4] = C(rhs[r].real(), rhs[r].imag());
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    for (int c = 0; c < 5; ++c) std::swap(A[col][c], A[piv][c]);
    for (int r = col + 1; r < 4; ++r) {
      const C m = A[r][col] / A[col][col];
      for (int c = col; c < 5; ++c) A[r][c] -= m * A[col][c];
    }
  }
  C sol[4];
  for (int r = 3; r >= 0; --r) {
    C s = A[r][4];
    for (int c = r + 1; c < 4; ++c) s -= A[r][c] * sol[c];
    sol[r] = s / A[r][r];
  }
  std::array<Complex, 4> out;
  for (int q = 0; q < 4; ++q) out[q] = Complex(static_cast<double>(sol[q].real()), static_cast<double>(sol[q].imag()));
  return out;
}

inline double rel_diff(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  double num = 0.0, den = 0.0;
  for (int q = 0; q < 4; ++q) {
    num += std::norm(a[q] - b[q]);
    den += std::norm(b[q]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// B(x; x) with every coefficient field zero and delta = 0, summed mode by
/// mode: |a+t|^2 + mu |k|^2 |w|^2 + zeta |k.w|^2 + kappa |k|^2 |t|^2
/// - eps (mu + zeta) Re(i k.w conj(a+t)).
inline double zero_coefficient_B(const Field& a, const Field& wx, const Field& wy, const Field& t, double mu,
                                 double zeta, double kappa, double eps) {
  const Grid& g = a.grid();
  const int n = g.n();
  long double s = 0.0L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const long double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      const long double k2 = kx * kx + ky * ky;
      const std::complex<long double> A(a.coeffs()(i, j).real(), a.coeffs()(i, j).imag());
      const std::complex<long double> T(t.coeffs()(i, j).real(), t.coeffs()(i, j).imag());
      const std::complex<long double> X(wx.coeffs()(i, j).real(), wx.coeffs()(i, j).imag());
      const std::complex<long double> Y(wy.coeffs()(i, j).real(), wy.coeffs()(i, j).imag());
      const std::complex<long double> div = std::complex<long double>(0.0L, 1.0L) * (kx * X + ky * Y);
      s += std::norm(A + T) + mu * k2 * (std::norm(X) + std::norm(Y)) + zeta * std::norm(div) +
           kappa * k2 * std::norm(T) - eps * (mu + zeta) * (div * std::conj(A + T)).real();
    }
  return static_cast<double>(s);
}

}  // namespace oracle
