#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "perilimit/errors.hpp"
#include "perilimit/linalg.hpp"
#include "perilimit/quadrature.hpp"

using namespace perilimit;

namespace {

constexpr double pi = std::numbers::pi;

double weight_sum(const SphereQuadrature& q) {
  double s = 0.0;
  for (double w : q.weights()) s += w;
  return s;
}

void check_rule(const SphereQuadrature& q) {
  const int n = q.dim();
  const double sigma = sphere_measure(n);
  EXPECT_NEAR(weight_sum(q), sigma, 1e-12);
  for (const auto& z : q.nodes()) EXPECT_NEAR(z.norm(), 1.0, 1e-14);
  for (double w : q.weights()) EXPECT_GT(w, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double m = integrate_over_sphere(q, [&](const Vector& z) { return z[j] * z[k]; });
      EXPECT_NEAR(m, j == k ? sigma / n : 0.0, 1e-10) << j << k;
    }
  }
}

}  // namespace

TEST(SphereMeasure, Values) {
  EXPECT_EQ(sphere_measure(1), 2.0);
  EXPECT_DOUBLE_EQ(sphere_measure(2), 2.0 * pi);
  EXPECT_DOUBLE_EQ(sphere_measure(3), 4.0 * pi);
}

TEST(GaussLegendre, ExactForPolynomials) {
  const GaussLegendre gl = gauss_legendre(5);
  for (int deg = 0; deg <= 9; ++deg) {
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], deg);
    EXPECT_NEAR(s, deg % 2 ? 0.0 : 2.0 / (deg + 1), 1e-14) << deg;
  }
}

TEST(CircleRule, Examples) {
  const auto q8 = build_circle_rule(8);
  EXPECT_NEAR(integrate_over_sphere(q8, [](const Vector&) { return 1.0; }), 2.0 * pi, 1e-14);
  const auto q16 = build_circle_rule(16);
  EXPECT_NEAR(integrate_over_sphere(q16, [](const Vector& z) { return z[0] * z[0]; }), pi, 1e-14);
  EXPECT_NEAR(integrate_over_sphere(q16, [](const Vector& z) { return std::pow(z[0], 4); }), 0.75 * pi, 1e-14);
  EXPECT_THROW(build_circle_rule(3), DomainError);
}

TEST(SphereRule, Examples) {
  const auto q = build_sphere_rule(8);
  EXPECT_NEAR(integrate_over_sphere(q, [](const Vector&) { return 1.0; }), 4.0 * pi, 1e-13);
  EXPECT_NEAR(integrate_over_sphere(q, [](const Vector& z) { return z[0] * z[1]; }), 0.0, 1e-14);
  EXPECT_NEAR(integrate_over_sphere(q, [](const Vector& z) { return z[2] * z[2]; }), 4.0 * pi / 3.0, 1e-13);
  EXPECT_NEAR(integrate_over_sphere(q, [](const Vector& z) { return std::pow(z[2], 4); }), 0.8 * pi, 1e-13);
  EXPECT_THROW(build_sphere_rule(1), DomainError);
  EXPECT_THROW(build_sphere_rule(513), DomainError);
}

TEST(SphereRule, DefaultRulesMeetMomentBounds) {
  check_rule(default_rule(2));
  check_rule(default_rule(3));
  EXPECT_EQ(default_rule(2).size(), 64u);
  EXPECT_EQ(default_rule(3).size(), 32u * 64u);
  check_rule(build_circle_rule(5));
  check_rule(build_sphere_rule(3));
}

TEST(MeanOverSphere, Examples) {
  const auto q = default_rule(2);
  EXPECT_NEAR(mean_over_sphere(q, [](const Vector&) { return ExtendedReal(3.25); }).value(), 3.25, 1e-14);
  const Matrix a = Matrix::diagonal({1.0, 2.0});
  const auto m = mean_over_sphere(q, [&](const Vector& z) { return ExtendedReal((a * z).norm_squared()); });
  EXPECT_NEAR(m.value(), 2.5, 1e-14);
  bool first = true;
  const auto inf = mean_over_sphere(q, [&](const Vector&) {
    const bool hit = first;
    first = false;
    return hit ? ExtendedReal::infinity() : ExtendedReal(1.0);
  });
  EXPECT_TRUE(inf.is_infinite());
}

TEST(MeanOverSphere, NanIsAnError) {
  const auto q = default_rule(3);
  EXPECT_THROW(integrate_over_sphere(q, [](const Vector&) { return std::nan(""); }), DomainError);
  EXPECT_THROW(mean_over_sphere(q, [](const Vector&) { return ExtendedReal(std::nan("")); }), DomainError);
}

TEST(MeanOverSphere, RotationInvariance) {
  std::mt19937_64 rng(3);
  for (int n : {2, 3}) {
    const auto q = n == 2 ? build_circle_rule(20) : build_sphere_rule(20);
    const Matrix a = random_matrix(n, n, rng, 1.0);
    auto f = [&](const Vector& z) { return std::exp((a * z)[0]) + std::pow((a * z).norm_squared(), 2); };
    const double base = integrate_over_sphere(q, f);
    for (int k = 0; k < 10; ++k) {
      const Rotation r = random_rotation(n, rng);
      const double rotated = integrate_over_sphere(q, [&](const Vector& z) { return f(r * z); });
      EXPECT_NEAR(rotated, base, 1e-8);
    }
  }
}

TEST(SphereRule, RefinementDoublesOrder) {
  const auto q = build_sphere_rule(10);
  EXPECT_EQ(q.refined().order(), 20);
  EXPECT_EQ(build_circle_rule(16).refined().size(), 32u);
}
