#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>

namespace perilimit {

inline constexpr int kMaxDim = 3;

/// Small real vector, dimension 1..3.
class Vector {
 public:
  Vector() = default;
  explicit Vector(int dim);
  Vector(std::initializer_list<double> values);

  [[nodiscard]] int dim() const { return dim_; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const double> entries() const {
    return {data_.data(), static_cast<std::size_t>(dim_)};
  }

  [[nodiscard]] double norm() const;
  [[nodiscard]] double norm_squared() const;

  static Vector unit(int dim, int axis);

  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator*(double s, const Vector& v);
  friend double dot(const Vector& a, const Vector& b);
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> data_{};
};

/// Dense m x n real matrix with m, n in {1, 2, 3}, stored row-major.
class Matrix {
 public:
  Matrix() : Matrix(1, 1) {}
  Matrix(int rows, int cols);
  /// Entries in row-major order; the count must equal rows * cols.
  Matrix(int rows, int cols, std::initializer_list<double> row_major);
  Matrix(int rows, int cols, std::span<const double> row_major);

  static Matrix identity(int n);
  static Matrix diagonal(std::initializer_list<double> diag);
  static Matrix diagonal(std::span<const double> diag);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  [[nodiscard]] std::span<const double> entries() const {
    return {data_.data(), static_cast<std::size_t>(rows_ * cols_)};
  }

  [[nodiscard]] Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend bool operator==(const Matrix&, const Matrix&) = default;

  [[nodiscard]] std::string to_string() const;

 private:
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i * cols_ + j);
  }

  int rows_ = 1;
  int cols_ = 1;
  std::array<double, kMaxDim * kMaxDim> data_{};
};

/// Frobenius norm |A|.
double frobenius(const Matrix& a);
double frobenius_squared(const Matrix& a);

/// Cofactor matrix: (cof A)_ij = (-1)^(i+j) times the minor with row i and
/// column j removed, so that cof(A) A^T = det(A) I. For 1x1 input returns [1].
Matrix cofactor(const Matrix& a);

/// Determinant by cofactor expansion (exact formula for n <= 3).
double determinant(const Matrix& a);

/// Rank-one matrix a (x) b.
Matrix outer(const Vector& a, const Vector& b);

/// Largest absolute entry of a - b; shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Proper rotation R in SO(dim): R R^T = I and det R = 1.
class Rotation {
 public:
  /// Wraps `m` after checking orthogonality and det = 1 within `tol`.
  explicit Rotation(const Matrix& m, double tol = 1e-10);
  static Rotation identity(int dim);

  [[nodiscard]] int dim() const { return matrix_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return matrix_; }

  friend Matrix operator*(const Rotation& r, const Matrix& a) { return r.matrix_ * a; }
  friend Matrix operator*(const Matrix& a, const Rotation& r) { return a * r.matrix_; }
  friend Vector operator*(const Rotation& r, const Vector& v) { return r.matrix_ * v; }

 private:
  struct Unchecked {};
  Rotation(Unchecked, const Matrix& m) : matrix_(m) {}
  friend Rotation random_rotation(int dim, std::mt19937_64& rng);

  Matrix matrix_;
};

/// Haar-distributed rotation in SO(2) (uniform angle) or SO(3) (normalized
/// Gaussian quaternion). Throws DimensionError for other dimensions.
Rotation random_rotation(int dim, std::mt19937_64& rng);
/// Deterministic per (dim, seed).
Rotation random_rotation(int dim, std::uint64_t seed);

/// Matrix with i.i.d. entries uniform in [-scale, scale].
Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0);

}  // namespace perilimit
