#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "perilimit/errors.hpp"
#include "perilimit/extended_real.hpp"
#include "perilimit/linalg.hpp"

namespace perilimit {

/// Surface measure of the unit sphere S^{n-1}: 2 for n=1, 2*pi for n=2, 4*pi for n=3.
double sphere_measure(int n);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int points);

/// Quadrature rule on the unit sphere S^{n-1}, n in {2, 3}. Weights are
/// positive and sum to the sphere measure.
class SphereQuadrature {
 public:
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::vector<Vector>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  /// Total surface measure sigma_{n-1}.
  [[nodiscard]] double measure() const { return sphere_measure(dim_); }
  /// Construction parameter: points on S^1, Gauss-Legendre order on S^2.
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::string description() const;

  /// A rule of the same family with twice the order.
  [[nodiscard]] SphereQuadrature refined() const;

 private:
  friend SphereQuadrature build_circle_rule(int points);
  friend SphereQuadrature build_sphere_rule(int order);
  SphereQuadrature(int dim, int order, std::vector<Vector> nodes, std::vector<double> weights)
      : dim_(dim), order_(order), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

  int dim_;
  int order_;
  std::vector<Vector> nodes_;
  std::vector<double> weights_;
};

inline constexpr int kDefaultCirclePoints = 64;
inline constexpr int kDefaultSphereOrder = 32;
inline constexpr int kMinSphereOrder = 2;
inline constexpr int kMaxSphereOrder = 512;

/// Equispaced rule on S^1 with weights 2*pi/points; exact for trigonometric
/// polynomials of degree < points. Requires points >= 4.
SphereQuadrature build_circle_rule(int points = kDefaultCirclePoints);

/// Product rule on S^2: Gauss-Legendre in cos(theta) with `order` nodes times
/// the trapezoid rule in phi with 2*order nodes. Exact for spherical
/// polynomials of degree <= 2*order - 1. Requires order in [2, 512].
SphereQuadrature build_sphere_rule(int order = kDefaultSphereOrder);

/// Default rule for dimension n (64 points on S^1, 32x64 on S^2).
SphereQuadrature default_rule(int n);

/// Sum of w_i f(z_i) for a real-valued integrand.
template <class F>
double integrate_over_sphere(const SphereQuadrature& q, F&& f) {
  double sum = 0.0;
  const auto& z = q.nodes();
  const auto& w = q.weights();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = f(z[i]);
    if (std::isnan(v)) throw DomainError("integrate_over_sphere: integrand is NaN");
    sum += w[i] * v;
  }
  return sum;
}

/// Mean integral (sum w_i f(z_i)) / sigma_{n-1} of an extended-real
/// integrand; +inf if f is +inf at any node. NaN raises DomainError.
template <class F>
ExtendedReal mean_over_sphere(const SphereQuadrature& q, F&& f) {
  double sum = 0.0;
  bool infinite = false;
  const auto& z = q.nodes();
  const auto& w = q.weights();
  for (std::size_t i = 0; i < z.size(); ++i) {
    const ExtendedReal v = f(z[i]);
    if (v.is_infinite()) {
      infinite = true;
    } else {
      sum += w[i] * v.value();
    }
  }
  if (infinite) return ExtendedReal::infinity();
  return ExtendedReal(sum / q.measure());
}

}  // namespace perilimit
