#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "perilimit/linalg.hpp"
#include "perilimit/pipeline.hpp"
#include "perilimit/potentials.hpp"
#include "perilimit/quadrature.hpp"

namespace perilimit {

/// Box [0, s_1] x ... x [0, s_n] split into res_1 x ... x res_n cells.
class BoxDomain {
 public:
  BoxDomain(std::vector<double> sides, std::vector<int> resolution);
  /// Unit cube in n dimensions with `res` cells per axis.
  static BoxDomain unit(int n, int res);

  [[nodiscard]] int dim() const { return static_cast<int>(sides_.size()); }
  [[nodiscard]] double side(int i) const { return sides_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] int resolution(int i) const { return res_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<double>& sides() const { return sides_; }
  [[nodiscard]] const std::vector<int>& resolutions() const { return res_; }
  [[nodiscard]] double cell_width(int i) const { return side(i) / resolution(i); }
  [[nodiscard]] double cell_volume() const { return cell_volume_; }
  [[nodiscard]] double volume() const;
  [[nodiscard]] double shortest_side() const;
  [[nodiscard]] double widest_cell() const;
  [[nodiscard]] std::size_t cell_count() const;
  [[nodiscard]] Vector cell_center(std::size_t flat) const;
  /// Same box, resolution scaled by num/den per axis (must stay integral).
  [[nodiscard]] BoxDomain rescaled(int num, int den) const;

 private:
  std::vector<double> sides_;
  std::vector<int> res_;
  double cell_volume_;
};

/// Deformation u: box -> R^m with its gradient.
class DeformationField {
 public:
  enum class Kind { affine, quadratic, sampled, analytic };

  /// u(x) = A x + b.
  static DeformationField affine(Matrix a, Vector offset = {});
  /// u_i(x) = (A x)_i + (kappa / 2) x_i^2 for i < min(m, n).
  static DeformationField quadratic(Matrix a, double kappa);
  /// Node values on the (res_i + 1)-point grid of `dom`, row-major with the
  /// last axis fastest; multilinear interpolation between nodes.
  static DeformationField sampled(const BoxDomain& dom, int m, std::vector<Vector> node_values);
  static DeformationField analytic(std::string name, int m, std::function<Vector(const Vector&)> eval,
                                   std::function<Matrix(const Vector&)> gradient);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int target_dim() const { return m_; }
  [[nodiscard]] std::string describe() const { return name_; }

  [[nodiscard]] Vector operator()(const Vector& x) const { return eval_(x); }
  [[nodiscard]] Matrix gradient(const Vector& x) const { return grad_(x); }

  /// R u (deformation-side rotation) and u + c.
  [[nodiscard]] DeformationField rotated(const Matrix& r) const;
  [[nodiscard]] DeformationField translated(const Vector& c) const;

 private:
  DeformationField(Kind kind, std::string name, int m, std::function<Vector(const Vector&)> eval,
                   std::function<Matrix(const Vector&)> grad)
      : kind_(kind), name_(std::move(name)), m_(m), eval_(std::move(eval)), grad_(std::move(grad)) {}

  Kind kind_;
  std::string name_;
  int m_;
  std::function<Vector(const Vector&)> eval_;
  std::function<Matrix(const Vector&)> grad_;
};

struct NonlocalSettings {
  int radial_points = 6;   // Gauss-Legendre nodes per ray
  int circle_points = 128;  // angular rule for n = 2
  int sphere_order = 16;   // angular rule for n = 3
  bool interior_only = false;  // outer integral over cells at distance >= delta from the boundary
};

/// Angular rule used by nonlocal_energy for dimension n.
SphereQuadrature angular_rule(int n, const NonlocalSettings& settings);

/// I_delta(u) = (n + beta) / delta^(n + beta) * int_Omega int_{Omega cap B(x, delta)} w(x' - x, u(x') - u(x)).
/// Outer integral: midpoint rule over cells. Inner integral: polar form
/// around the cell center, rays clipped at the box boundary, Gauss-Legendre
/// in r, angular rule on the sphere. Requires delta < shortest_side / 2 and
/// delta >= 3 cell widths (DomainError otherwise).
double nonlocal_energy(const PairwisePotential& w, double beta, double delta, const DeformationField& u,
                       const BoxDomain& dom, const NonlocalSettings& settings = {});

struct NonlocalEstimate {
  double value = 0.0;     // on dom
  double coarse = 0.0;    // on dom with half the resolution
  double estimate = 0.0;  // |value - coarse|
};

/// Two-grid estimate; the resolution of `dom` must be even on every axis.
NonlocalEstimate nonlocal_energy_with_estimate(const PairwisePotential& w, double beta, double delta,
                                               const DeformationField& u, const BoxDomain& dom,
                                               const NonlocalSettings& settings = {});

/// Total volume of the cells used when interior_only is set.
double interior_volume(const BoxDomain& dom, double delta);

/// Midpoint-rule value of int_Omega w̄(grad u(x)) dx on the cells of `dom`
/// (optionally only the interior cells for `delta`).
double local_reference(const BlowupResult& blowup, const DeformationField& u, const BoxDomain& dom,
                       const SphereQuadrature& q, bool interior_only = false, double delta = 0.0);

struct ConvergenceRow {
  double delta = 0.0;
  double energy = 0.0;     // I_delta(u)
  double reference = 0.0;  // int w̄(grad u)
  double gap = 0.0;        // |energy - reference|
  double slope_running = 0.0;  // log-log slope of gap vs delta over rows so far; NaN for the first row
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // least-squares over all rows with gap > 0; NaN if fewer than two
  int cells_per_delta = 8;
};

/// I_delta on the box `sides` for each delta (strictly decreasing), with
/// cell width delta / cells_per_delta, against the local reference on the
/// same grid.
ConvergenceStudy convergence_study(const PairwisePotential& w, double beta, const DeformationField& u,
                                   const std::vector<double>& sides, const std::vector<double>& deltas,
                                   int cells_per_delta = 8, const NonlocalSettings& settings = {});

/// CSV columns delta, I_delta, I_local, gap, slope_running.
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study);

}  // namespace perilimit
