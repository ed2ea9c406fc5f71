#include "lowmach/spectral.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "lowmach/errors.hpp"

namespace lowmach {

namespace {

// Per-thread transform workspace; Eigen::FFT caches plans and is not reentrant.
class Transform2D {
 public:
  Transform2D() { fft_.SetFlag(Eigen::FFT<double>::Unscaled); }

  void forward(CoeffArray& a) { apply(a, true); }
  void inverse(CoeffArray& a) { apply(a, false); }

 private:
  void apply(CoeffArray& a, bool forward) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    in_.resize(rows);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) in_[i] = a(i, j);
      run(forward);
      for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = out_[i];
    }
    in_.resize(cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) in_[j] = a(i, j);
      run(forward);
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = out_[j];
    }
  }

  void run(bool forward) {
    if (forward)
      fft_.fwd(out_, in_);
    else
      fft_.inv(out_, in_);
  }

  Eigen::FFT<double> fft_;
  std::vector<Complex> in_, out_;
};

Transform2D& workspace() {
  thread_local Transform2D t;
  return t;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidParameter("fields live on different grids");
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(int n, double dealias_fraction) : n_(n), dealias_fraction_(dealias_fraction) {
  if (n < 8 || n % 2 != 0) throw InvalidParameter("grid: n must be even and >= 8");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw InvalidParameter("grid: dealias_fraction must lie in (0, 1]");
}

bool Grid::resolved(int i) const {
  const int k = std::abs(wavenumber(i));
  return k < dealias_fraction_ * n_ / 2.0 - 1e-9;
}

double Grid::coordinate(int i) const { return 2.0 * std::numbers::pi * i / n_; }

// ---------------------------------------------------------------------------
// Field

Field::Field(const Grid& grid) : grid_(grid), coeffs_(CoeffArray::Zero(grid.n(), grid.n())) {}

Field::Field(const Grid& grid, CoeffArray coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != grid.n() || coeffs_.cols() != grid.n())
    throw InvalidParameter("field: coefficient array does not match grid");
}

Field Field::constant(const Grid& grid, double value) {
  Field f(grid);
  f.coeffs_(0, 0) = value;
  return f;
}

Field Field::from_physical(const Grid& grid, const PhysArray& values) {
  const int n = grid.n();
  if (values.rows() != n || values.cols() != n)
    throw InvalidParameter("field: physical array does not match grid");
  CoeffArray a = values.cast<Complex>();
  workspace().forward(a);
  a /= static_cast<double>(n) * n;
  return Field(grid, std::move(a));
}

PhysArray Field::to_physical() const {
  CoeffArray a = coeffs_;
  workspace().inverse(a);
  return a.real();
}

void Field::set_mode(int kx, int ky, Complex value) {
  const int i = grid_.index(kx), j = grid_.index(ky);
  const int ci = grid_.index(-kx == grid_.n() / 2 ? grid_.n() / 2 : -kx);
  const int cj = grid_.index(-ky == grid_.n() / 2 ? grid_.n() / 2 : -ky);
  if (i == ci && j == cj) {
    coeffs_(i, j) = Complex(value.real(), 0.0);
    return;
  }
  coeffs_(i, j) = value;
  coeffs_(ci, cj) = std::conj(value);
}

double Field::hermitian_defect() const {
  const int n = grid_.n();
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ci = (n - i) % n, cj = (n - j) % n;
      worst = std::max(worst, std::abs(coeffs_(i, j) - std::conj(coeffs_(ci, cj))));
    }
  return worst;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  coeffs_ += other.coeffs_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  coeffs_ -= other.coeffs_;
  return *this;
}

Field& Field::operator*=(double scale) {
  coeffs_ *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator-(Field a) { return a *= -1.0; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }
Field operator/(Field a, double s) { return a *= 1.0 / s; }
Field operator+(Field a, double c) {
  a.coeffs()(0, 0) += c;
  return a;
}
Field operator+(double c, Field a) { return std::move(a) + c; }

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(Field x, Field y) : c{std::move(x), std::move(y)} {
  require_same_grid(c[0].grid(), c[1].grid());
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < kDim; ++i) c[i] += o.c[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < kDim; ++i) c[i] -= o.c[i];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& f : c) f *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator-(VectorField a) { return a *= -1.0; }
VectorField operator*(double s, VectorField a) { return a *= s; }
VectorField operator*(VectorField a, double s) { return a *= s; }
VectorField operator/(VectorField a, double s) { return a *= 1.0 / s; }

// ---------------------------------------------------------------------------
// Operators

Field derivative(const Field& f, int axis) {
  const Grid& g = f.grid();
  const int n = g.n();
  CoeffArray out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int k = axis == 0 ? g.derivative_wavenumber(i) : g.derivative_wavenumber(j);
      out(i, j) = f.coeffs()(i, j) * Complex(0.0, k);
    }
  return Field(g, std::move(out));
}

VectorField gradient(const Field& f) { return VectorField(derivative(f, 0), derivative(f, 1)); }

Field divergence(const VectorField& v) { return derivative(v[0], 0) + derivative(v[1], 1); }

Field laplacian(const Field& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  CoeffArray out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      out(i, j) = -(kx * kx + ky * ky) * f.coeffs()(i, j);
    }
  return Field(g, std::move(out));
}

VectorField laplacian(const VectorField& v) { return VectorField(laplacian(v[0]), laplacian(v[1])); }

Field inverse_laplacian(const Field& f) {
  if (std::abs(f.coeffs()(0, 0)) > 1e-13)
    throw NonZeroMean("inverse_laplacian: input mean " + std::to_string(f.mean()) + " is not zero");
  const Grid& g = f.grid();
  const int n = g.n();
  CoeffArray out(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      const double k2 = kx * kx + ky * ky;
      out(i, j) = k2 > 0.0 ? f.coeffs()(i, j) / -k2 : Complex(0.0);
    }
  return Field(g, std::move(out));
}

VectorField leray_project(const VectorField& v) {
  const Grid& g = v.grid();
  const int n = g.n();
  VectorField out(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.derivative_wavenumber(i), ky = g.derivative_wavenumber(j);
      const double k2 = kx * kx + ky * ky;
      const Complex vx = v[0].coeffs()(i, j), vy = v[1].coeffs()(i, j);
      if (k2 == 0.0) {
        out[0].coeffs()(i, j) = vx;
        out[1].coeffs()(i, j) = vy;
        continue;
      }
      const Complex kv = (kx * vx + ky * vy) / k2;
      out[0].coeffs()(i, j) = vx - kx * kv;
      out[1].coeffs()(i, j) = vy - ky * kv;
    }
  return out;
}

Field mean_zero_project(Field f) {
  f.coeffs()(0, 0) = 0.0;
  return f;
}

VectorField mean_zero_project(VectorField v) {
  for (auto& f : v.c) f = mean_zero_project(std::move(f));
  return v;
}

Field truncate(Field f) {
  const Grid& g = f.grid();
  const int n = g.n();
  for (int j = 0; j < n; ++j) {
    const bool rj = g.resolved(j);
    for (int i = 0; i < n; ++i)
      if (!rj || !g.resolved(i)) f.coeffs()(i, j) = 0.0;
  }
  return f;
}

VectorField truncate(VectorField v) {
  for (auto& f : v.c) f = truncate(std::move(f));
  return v;
}

Field dealiased_product(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  const PhysArray pa = truncate(a).to_physical();
  const PhysArray pb = truncate(b).to_physical();
  return truncate(Field::from_physical(a.grid(), pa * pb));
}

VectorField dealiased_product(const Field& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid());
  const PhysArray pa = truncate(a).to_physical();
  VectorField out(a.grid());
  for (int i = 0; i < kDim; ++i)
    out[i] = truncate(Field::from_physical(a.grid(), pa * truncate(b[i]).to_physical()));
  return out;
}

Field dealiased_dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid());
  PhysArray acc = PhysArray::Zero(a.grid().n(), a.grid().n());
  for (int i = 0; i < kDim; ++i) acc += truncate(a[i]).to_physical() * truncate(b[i]).to_physical();
  return truncate(Field::from_physical(a.grid(), acc));
}

Field advect(const VectorField& a, const Field& s) { return dealiased_dot(a, gradient(s)); }

VectorField advect(const VectorField& a, const VectorField& u) {
  return VectorField(advect(a, u[0]), advect(a, u[1]));
}

// ---------------------------------------------------------------------------
// Norms

double sobolev_norm(const Field& f, int m) {
  if (m < -1 || m > 4) throw InvalidParameter("sobolev_norm: m must lie in [-1, 4]");
  const Grid& g = f.grid();
  const int n = g.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double kx = g.wavenumber(i), ky = g.wavenumber(j);
      sum += std::pow(1.0 + kx * kx + ky * ky, m) * std::norm(f.coeffs()(i, j));
    }
  return std::sqrt(sum);
}

double sobolev_norm(const VectorField& v, int m) {
  double sum = 0.0;
  for (const auto& f : v.c) {
    const double x = sobolev_norm(f, m);
    sum += x * x;
  }
  return std::sqrt(sum);
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  return (a.coeffs() * b.coeffs().conjugate()).real().sum();
}

double inner(const VectorField& a, const VectorField& b) {
  double sum = 0.0;
  for (int i = 0; i < kDim; ++i) sum += inner(a[i], b[i]);
  return sum;
}

double max_abs_coeff_diff(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  return (a.coeffs() - b.coeffs()).abs().maxCoeff();
}

double max_abs_coeff_diff(const VectorField& a, const VectorField& b) {
  double worst = 0.0;
  for (int i = 0; i < kDim; ++i) worst = std::max(worst, max_abs_coeff_diff(a[i], b[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// Random fields

Field random_field(const Grid& grid, std::mt19937_64& rng, int max_k, bool with_mean) {
  if (max_k < 0 || max_k >= grid.n() / 2) throw InvalidParameter("random_field: max_k out of range");
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Field f(grid);
  for (int kx = 0; kx <= max_k; ++kx)
    for (int ky = -max_k; ky <= max_k; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      const double re = uni(rng), im = uni(rng);
      const double decay = 1.0 / (1.0 + kx * kx + ky * ky);
      f.set_mode(kx, ky, Complex(re, im) * decay);
    }
  if (with_mean) f.coeffs()(0, 0) = uni(rng);
  return f;
}

VectorField random_vector_field(const Grid& grid, std::mt19937_64& rng, int max_k) {
  Field x = random_field(grid, rng, max_k);
  Field y = random_field(grid, rng, max_k);
  return VectorField(std::move(x), std::move(y));
}

}  // namespace lowmach
