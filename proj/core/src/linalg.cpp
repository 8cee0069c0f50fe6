#include "perilimit/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"

namespace perilimit {

namespace {

void check_dim(int d, const char* what) {
  if (d < 1 || d > kMaxDim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(d) +
                         " outside 1.." + std::to_string(kMaxDim));
  }
}

void require_square(const Matrix& a, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(int dim) : dim_(dim) { check_dim(dim, "Vector"); }

Vector::Vector(std::initializer_list<double> values) : dim_(static_cast<int>(values.size())) {
  check_dim(dim_, "Vector");
  std::size_t i = 0;
  for (double v : values) data_[i++] = v;
}

double Vector::norm_squared() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += data_[i] * data_[i];
  return s;
}

double Vector::norm() const { return std::sqrt(norm_squared()); }

Vector Vector::unit(int dim, int axis) {
  Vector v(dim);
  if (axis < 0 || axis >= dim) throw DimensionError("Vector::unit: axis out of range");
  v[axis] = 1.0;
  return v;
}

Vector operator+(const Vector& a, const Vector& b) {
  if (a.dim_ != b.dim_) throw DimensionError("Vector +: dimension mismatch");
  Vector r(a.dim_);
  for (int i = 0; i < a.dim_; ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  if (a.dim_ != b.dim_) throw DimensionError("Vector -: dimension mismatch");
  Vector r(a.dim_);
  for (int i = 0; i < a.dim_; ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& v) {
  Vector r(v.dim_);
  for (int i = 0; i < v.dim_; ++i) r[i] = s * v[i];
  return r;
}

double dot(const Vector& a, const Vector& b) {
  if (a.dim_ != b.dim_) throw DimensionError("dot: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dim_; ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_dim(rows, "Matrix rows");
  check_dim(cols, "Matrix cols");
}

Matrix::Matrix(int rows, int cols, std::initializer_list<double> row_major)
    : Matrix(rows, cols, std::span<const double>(row_major.begin(), row_major.size())) {}

Matrix::Matrix(int rows, int cols, std::span<const double> row_major) : Matrix(rows, cols) {
  if (row_major.size() != static_cast<std::size_t>(rows * cols)) {
    throw DimensionError("Matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  for (std::size_t i = 0; i < row_major.size(); ++i) data_[i] = row_major[i];
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix +: shape mismatch");
  for (int k = 0; k < rows_ * cols_; ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("Matrix -: shape mismatch");
  for (int k = 0; k < rows_ * cols_; ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (int k = 0; k < rows_ * cols_; ++k) data_[k] *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("Matrix *: inner dimension mismatch");
  Matrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int j = 0; j < b.cols_; ++j) {
      double s = 0.0;
      for (int k = 0; k < a.cols_; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols_ != v.dim()) throw DimensionError("Matrix * Vector: dimension mismatch");
  Vector r(a.rows_);
  for (int i = 0; i < a.rows_; ++i) {
    double s = 0.0;
    for (int k = 0; k < a.cols_; ++k) s += a(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < cols_; ++j) {
      if (j) os << ' ';
      os << format_double((*this)(i, j));
    }
  }
  os << ']';
  return os.str();
}

double frobenius_squared(const Matrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return s;
}

double frobenius(const Matrix& a) {
  // scaled so that tiny or huge entries neither underflow nor overflow
  double scale = 0.0;
  for (double x : a.entries()) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : a.entries()) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

Matrix cofactor(const Matrix& a) {
  require_square(a, "cofactor");
  const int n = a.rows();
  Matrix c(n, n);
  switch (n) {
    case 1:
      c(0, 0) = 1.0;
      break;
    case 2:
      c(0, 0) = a(1, 1);
      c(0, 1) = -a(1, 0);
      c(1, 0) = -a(0, 1);
      c(1, 1) = a(0, 0);
      break;
    default:
      for (int i = 0; i < 3; ++i) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        for (int j = 0; j < 3; ++j) {
          const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
          // Cyclic index choice absorbs the (-1)^(i+j) sign.
          c(i, j) = a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1);
        }
      }
      break;
  }
  return c;
}

double determinant(const Matrix& a) {
  require_square(a, "determinant");
  switch (a.rows()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    default:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix m(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) m = std::max(m, std::abs(ea[k] - eb[k]));
  return m;
}

// ---------------------------------------------------------------- Rotation

Rotation::Rotation(const Matrix& m, double tol) : matrix_(m) {
  require_square(m, "Rotation");
  const double orth = max_abs_diff(m * m.transpose(), Matrix::identity(m.rows()));
  if (orth > tol) throw DomainError("Rotation: R R^T deviates from I by " + format_double(orth));
  const double det = determinant(m);
  if (std::abs(det - 1.0) > tol) throw DomainError("Rotation: det R = " + format_double(det));
}

Rotation Rotation::identity(int dim) { return Rotation(Unchecked{}, Matrix::identity(dim)); }

Rotation random_rotation(int dim, std::mt19937_64& rng) {
  if (dim == 2) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double t = angle(rng);
    const double c = std::cos(t), s = std::sin(t);
    return Rotation(Rotation::Unchecked{}, Matrix(2, 2, {c, -s, s, c}));
  }
  if (dim == 3) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    double w = 0, x = 0, y = 0, z = 0, n2 = 0;
    do {
      w = gauss(rng);
      x = gauss(rng);
      y = gauss(rng);
      z = gauss(rng);
      n2 = w * w + x * x + y * y + z * z;
    } while (n2 < 1e-12);
    const double inv = 1.0 / std::sqrt(n2);
    w *= inv;
    x *= inv;
    y *= inv;
    z *= inv;
    return Rotation(Rotation::Unchecked{},
                    Matrix(3, 3,
                           {1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                            2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                            2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}));
  }
  throw DimensionError("random_rotation: dim must be 2 or 3, got " + std::to_string(dim));
}

Rotation random_rotation(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation(dim, rng);
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

}  // namespace perilimit
