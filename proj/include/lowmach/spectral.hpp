#pragma once

// Pseudo-spectral kernel on the 2D torus [0, 2*pi)^2.
//
// Fields are stored as Fourier coefficients normalized so that coeff(0, 0) is
// the mean value and sum |coeff|^2 is the mean square (unit-measure domain).
// Coefficient arrays are n x n in FFT order: row index <-> k_x, column index
// <-> k_y, with index i holding wavenumber i for i <= n/2 and i - n otherwise.

#include <array>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace lowmach {

using Complex = std::complex<double>;
using CoeffArray = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using PhysArray = Eigen::ArrayXXd;

inline constexpr int kDim = 2;

class Grid {
 public:
  explicit Grid(int n = 32, double dealias_fraction = 2.0 / 3.0);

  int n() const { return n_; }
  double dealias_fraction() const { return dealias_fraction_; }

  /// Wavenumber stored at array index `i` along either axis.
  int wavenumber(int i) const { return i <= n_ / 2 ? i : i - n_; }
  /// Array index holding wavenumber `k`; k must lie in [-n/2+1, n/2].
  int index(int k) const { return k >= 0 ? k : k + n_; }

  /// Wavenumber used by odd derivatives: the Nyquist wavenumber maps to 0.
  int derivative_wavenumber(int i) const { return i == n_ / 2 ? 0 : wavenumber(i); }

  /// Modes with |k_axis| >= dealias_fraction * n / 2 are removed around products.
  bool resolved(int i) const;

  double coordinate(int i) const;

  bool operator==(const Grid& other) const = default;

 private:
  int n_;
  double dealias_fraction_;
};

/// Real periodic scalar field stored as Hermitian-symmetric Fourier coefficients.
class Field {
 public:
  Field() : Field(Grid{}) {}
  explicit Field(const Grid& grid);
  Field(const Grid& grid, CoeffArray coeffs);

  static Field constant(const Grid& grid, double value);
  static Field from_physical(const Grid& grid, const PhysArray& values);

  /// Samples `fn(x, y)` on the collocation grid.
  template <typename Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    PhysArray values(grid.n(), grid.n());
    for (int j = 0; j < grid.n(); ++j)
      for (int i = 0; i < grid.n(); ++i) values(i, j) = fn(grid.coordinate(i), grid.coordinate(j));
    return from_physical(grid, values);
  }

  PhysArray to_physical() const;

  const Grid& grid() const { return grid_; }
  const CoeffArray& coeffs() const { return coeffs_; }
  CoeffArray& coeffs() { return coeffs_; }

  Complex coeff(int kx, int ky) const { return coeffs_(grid_.index(kx), grid_.index(ky)); }
  /// Sets coeff(k) and its conjugate partner coeff(-k).
  void set_mode(int kx, int ky, Complex value);

  double mean() const { return coeffs_(0, 0).real(); }
  /// Largest |coeff(k) - conj(coeff(-k))| over all modes.
  double hermitian_defect() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double scale);

 private:
  Grid grid_;
  CoeffArray coeffs_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator-(Field a);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
Field operator/(Field a, double s);
Field operator+(Field a, double c);
Field operator+(double c, Field a);

/// d real scalar fields sharing one grid.
struct VectorField {
  std::array<Field, kDim> c;

  VectorField() = default;
  explicit VectorField(const Grid& grid) : c{Field(grid), Field(grid)} {}
  VectorField(Field x, Field y);

  Field& operator[](int i) { return c[i]; }
  const Field& operator[](int i) const { return c[i]; }
  const Grid& grid() const { return c[0].grid(); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator-(VectorField a);
VectorField operator*(double s, VectorField a);
VectorField operator*(VectorField a, double s);
VectorField operator/(VectorField a, double s);

// Differential operators. All are exact coefficient-wise multiplications.
Field derivative(const Field& f, int axis);
VectorField gradient(const Field& f);
Field divergence(const VectorField& v);
Field laplacian(const Field& f);
VectorField laplacian(const VectorField& v);
/// Inverse Laplacian on mean-free fields; throws NonZeroMean if |mean| > 1e-13.
Field inverse_laplacian(const Field& f);
/// Leray projection onto the divergence-free subspace.
VectorField leray_project(const VectorField& v);

Field mean_zero_project(Field f);
VectorField mean_zero_project(VectorField v);

/// Zeroes modes outside the dealiasing band.
Field truncate(Field f);
VectorField truncate(VectorField v);

/// Pointwise product with 2/3-rule truncation before and after.
Field dealiased_product(const Field& a, const Field& b);
VectorField dealiased_product(const Field& a, const VectorField& b);
/// sum_j a_j b_j, dealiased.
Field dealiased_dot(const VectorField& a, const VectorField& b);
/// (a . grad) s, dealiased.
Field advect(const VectorField& a, const Field& s);
/// (a . grad) u, dealiased, component-wise.
VectorField advect(const VectorField& a, const VectorField& u);

/// Discrete H^m norm, sum_k (1 + |k|^2)^m |coeff(k)|^2, for m in [-1, 4].
double sobolev_norm(const Field& f, int m);
double sobolev_norm(const VectorField& v, int m);

/// Unit-measure L2 inner product, evaluated exactly by Parseval.
double inner(const Field& a, const Field& b);
double inner(const VectorField& a, const VectorField& b);

double max_abs_coeff_diff(const Field& a, const Field& b);
double max_abs_coeff_diff(const VectorField& a, const VectorField& b);

/// Seeded random real field with modes |k_axis| <= max_k and coefficients
/// decaying like 1 / (1 + |k|^2). Mean-free unless `with_mean`.
Field random_field(const Grid& grid, std::mt19937_64& rng, int max_k, bool with_mean = false);
VectorField random_vector_field(const Grid& grid, std::mt19937_64& rng, int max_k);

}  // namespace lowmach
