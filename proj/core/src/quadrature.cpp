#include "perilimit/quadrature.hpp"

#include <numbers>

namespace perilimit {

double sphere_measure(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi;
    default:
      throw DimensionError("sphere_measure: n must be 1, 2 or 3, got " + std::to_string(n));
  }
}

GaussLegendre gauss_legendre(int points) {
  if (points < 1) throw DomainError("gauss_legendre: need at least one point");
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(points));
  rule.weights.resize(static_cast<std::size_t>(points));
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(points - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (points % 2 == 1) rule.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
  return rule;
}

std::string SphereQuadrature::description() const {
  if (dim_ == 2) return "circle-equispaced:" + std::to_string(order_);
  return "sphere-gauss-trapezoid:" + std::to_string(order_) + "x" + std::to_string(2 * order_);
}

SphereQuadrature SphereQuadrature::refined() const {
  return dim_ == 2 ? build_circle_rule(2 * order_) : build_sphere_rule(2 * order_);
}

SphereQuadrature build_circle_rule(int points) {
  if (points < 4) throw DomainError("build_circle_rule: points must be >= 4, got " + std::to_string(points));
  std::vector<Vector> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(points));
  const double w = 2.0 * std::numbers::pi / points;
  for (int i = 0; i < points; ++i) {
    const double t = 2.0 * std::numbers::pi * i / points;
    nodes.push_back(Vector{std::cos(t), std::sin(t)});
  }
  weights.assign(static_cast<std::size_t>(points), w);
  return SphereQuadrature(2, points, std::move(nodes), std::move(weights));
}

SphereQuadrature build_sphere_rule(int order) {
  if (order < kMinSphereOrder || order > kMaxSphereOrder) {
    throw DomainError("build_sphere_rule: unsupported order " + std::to_string(order) + " (supported " +
                      std::to_string(kMinSphereOrder) + ".." + std::to_string(kMaxSphereOrder) + ")");
  }
  const GaussLegendre gl = gauss_legendre(order);
  const int azimuths = 2 * order;
  const double dphi = 2.0 * std::numbers::pi / azimuths;
  std::vector<Vector> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(order * azimuths));
  weights.reserve(nodes.capacity());
  for (int i = 0; i < order; ++i) {
    const double ct = gl.nodes[static_cast<std::size_t>(i)];
    const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
    for (int j = 0; j < azimuths; ++j) {
      const double phi = dphi * j;
      Vector z{st * std::cos(phi), st * std::sin(phi), ct};
      // Renormalize to keep |z| = 1 at the last bit.
      nodes.push_back((1.0 / z.norm()) * z);
      weights.push_back(gl.weights[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return SphereQuadrature(3, order, std::move(nodes), std::move(weights));
}

SphereQuadrature default_rule(int n) {
  if (n == 2) return build_circle_rule(kDefaultCirclePoints);
  if (n == 3) return build_sphere_rule(kDefaultSphereOrder);
  throw DimensionError("default_rule: n must be 2 or 3, got " + std::to_string(n));
}

}  // namespace perilimit
