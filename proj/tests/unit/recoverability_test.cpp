#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "perilimit/errors.hpp"
#include "perilimit/pipeline.hpp"
#include "perilimit/recoverability.hpp"

using namespace perilimit;

namespace {

constexpr double pi = std::numbers::pi;

StoredEnergy quartic() { return make_frobenius_profile(ScalarProfile::power(1.0, 2.0)); }

StoredEnergy mooney_rivlin() { return make_mooney_rivlin(1.0, 1.0, ScalarProfile::well()); }

}  // namespace

TEST(Residual, SquaredNormIsRecoverable) {
  std::mt19937_64 rng(2);
  for (int n : {2, 3}) {
    const auto q = default_rule(n);
    for (int k = 0; k < 20; ++k) {
      const auto e = recoverability_residual(make_frobenius_squared(), random_matrix(n, n, rng, 2.0), q);
      EXPECT_EQ(e.status, ResidualStatus::finite);
      EXPECT_NEAR(e.residual, 0.0, 1e-9);
    }
  }
}

TEST(Residual, QuarticNormInThePlane) {
  const auto e = recoverability_residual(quartic(), Matrix::diagonal({1.0, 2.0}), default_rule(2));
  EXPECT_EQ(e.lhs.value(), 25.0);
  EXPECT_NEAR(e.rhs.value(), 29.5, 1e-10);
  EXPECT_NEAR(e.residual, -4.5, 1e-6);
}

TEST(Residual, MooneyRivlinIsNotRecoverable) {
  const auto e = recoverability_residual(mooney_rivlin(), Matrix::diagonal({2.0, 0.5, 1.0}), default_rule(3));
  EXPECT_DOUBLE_EQ(e.lhs.value(), 10.5);
  EXPECT_GT(std::abs(e.residual), 0.1);
  // Same value at higher quadrature order.
  const auto fine = recoverability_residual(mooney_rivlin(), Matrix::diagonal({2.0, 0.5, 1.0}), build_sphere_rule(64));
  EXPECT_NEAR(fine.residual, e.residual, 1e-8);
}

TEST(Residual, IncompressibleGivesInfiniteViolation) {
  const auto e = recoverability_residual(make_incompressible_mr(1.0, 1.0), Matrix::diagonal({2.0, 0.5, 1.0}),
                                         default_rule(3));
  EXPECT_EQ(e.status, ResidualStatus::infinite_violation);
  EXPECT_TRUE(e.lhs.is_finite());
  EXPECT_TRUE(e.rhs.is_infinite());
}

TEST(Residual, BothSidesInfiniteIsIndeterminate) {
  const auto e = recoverability_residual(make_incompressible_mr(1.0, 1.0), Matrix::diagonal({2.0, 1.0, 1.0}),
                                         default_rule(3));
  EXPECT_EQ(e.status, ResidualStatus::indeterminate);
  EXPECT_TRUE(std::isnan(e.residual));
}

TEST(Residual, VanishesOnMultiplesOfIdentity) {
  // |tIz| = t on the sphere; only rounding in the weight sum remains.
  for (const auto& w : {quartic(), mooney_rivlin(), make_affine_frobenius(1.0, 2.0),
                        make_cofactor_profile(ScalarProfile::well()), make_incompressible_mr(1.0, 1.0)}) {
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) {
      const auto e = recoverability_residual(w, t * Matrix::identity(3), default_rule(3));
      if (e.status == ResidualStatus::finite) {
        EXPECT_NEAR(e.residual, 0.0, 1e-12 * (1.0 + std::abs(e.lhs.value()))) << w.describe() << " t=" << t;
      } else {
        EXPECT_EQ(e.status, ResidualStatus::indeterminate);
      }
    }
  }
}

TEST(Residual, RotationInvariant) {
  std::mt19937_64 rng(6);
  const auto q = default_rule(3);
  const auto mr_square = make_mooney_rivlin(1.0, 1.0, ScalarProfile::power(1.0, 2.0));
  for (const auto& w : {quartic(), mr_square, make_cofactor_profile(ScalarProfile::power(1.0, 2.0))}) {
    for (int k = 0; k < 10; ++k) {
      const Matrix a = random_matrix(3, 3, rng);
      const Rotation r1 = random_rotation(3, rng), r2 = random_rotation(3, rng);
      EXPECT_NEAR(recoverability_residual(w, r1 * a * r2, q).residual, recoverability_residual(w, a, q).residual, 1e-8);
    }
  }
}

TEST(Residual, RotationInvariantUpToQuadratureForOddPowers) {
  // (|Az|^3 - 1)^2 has odd powers of |Az|, which the rule does not integrate exactly.
  std::mt19937_64 rng(6);
  const auto q = default_rule(3);
  const auto w = mooney_rivlin();
  for (int k = 0; k < 10; ++k) {
    const Matrix a = random_matrix(3, 3, rng);
    const Rotation r1 = random_rotation(3, rng), r2 = random_rotation(3, rng);
    const double base = recoverability_residual(w, a, q).residual;
    EXPECT_NEAR(recoverability_residual(w, r1 * a * r2, q).residual, base, 1e-7 * (1.0 + std::abs(base)));
  }
}

TEST(Residual, ShapeChecks) {
  EXPECT_THROW(recoverability_residual(quartic(), Matrix::identity(3), default_rule(2)), DimensionError);
  EXPECT_THROW(recoverability_residual(quartic(), Matrix(2, 3), default_rule(3)), DimensionError);
}

TEST(Candidate, Examples) {
  const auto c2 = extract_candidate(make_frobenius_squared(), 2);
  for (double t : {0.0, 0.5, 2.0}) EXPECT_NEAR(c2(t).value(), t * t / pi, 1e-15);
  const auto c3 = extract_candidate(make_frobenius_squared(), 3);
  EXPECT_NEAR(c3(2.0).value(), 3.0 * 4.0 / (4.0 * pi), 1e-15);
  EXPECT_EQ(extract_candidate(quartic(), 3)(0.0).value(), 0.0);
  EXPECT_THROW(c2(-1.0), DomainError);
}

TEST(Candidate, LocalDensityOfCandidateMatchesSphereMean) {
  std::mt19937_64 rng(8);
  for (int n : {2, 3}) {
    const auto q = default_rule(n);
    const auto cand = extract_candidate(mooney_rivlin(), n);
    const auto limit = BlowupResult::from_declared(cand.as_potential(), n);
    for (int k = 0; k < 5; ++k) {
      const Matrix a = random_matrix(n, n, rng);
      const double via_pipeline = local_density(limit, a, q);
      const double via_mean = q.measure() * mean_over_sphere(q, [&](const Vector& z) { return cand((a * z).norm()); }).value();
      EXPECT_NEAR(via_pipeline, via_mean, 1e-12 * (1.0 + std::abs(via_mean)));
    }
  }
}

TEST(Roundtrip, PositiveControls) {
  const auto q = default_rule(3);
  const auto battery = default_test_battery(3, 1);
  for (const auto& w : {make_frobenius_squared(), make_affine_frobenius(1.0, 2.0)}) {
    const auto rep = roundtrip_check(w, q, battery);
    EXPECT_EQ(rep.verdict, Verdict::consistent) << w.describe();
    EXPECT_LE(rep.max_abs_residual, 1e-8);
    EXPECT_EQ(rep.entries.size(), battery.size());
  }
}

TEST(Roundtrip, MooneyRivlinViolated) {
  const auto rep = roundtrip_check(mooney_rivlin(), default_rule(3), default_test_battery(3, 1));
  EXPECT_EQ(rep.verdict, Verdict::violated);
  EXPECT_GT(rep.max_abs_residual, 0.1);
}

TEST(Roundtrip, IncompressibleIsInfiniteViolation) {
  const auto rep = roundtrip_check(make_incompressible_mr(1.0, 1.0), default_rule(3), default_test_battery(3, 1));
  EXPECT_EQ(rep.verdict, Verdict::infinite_violation);
  EXPECT_GT(rep.indeterminate, 0);
}

TEST(Roundtrip, QuadraticDensityExactOnCoarseRules) {
  // |Az|^2 is a degree-2 polynomial on the sphere, so even order 2 is exact.
  const auto battery = default_test_battery(3, 4, 5);
  for (int order : {2, 4, 8}) {
    const auto rep = roundtrip_check(make_frobenius_squared(), build_sphere_rule(order), battery);
    EXPECT_EQ(rep.verdict, Verdict::consistent);
    EXPECT_LE(rep.max_abs_residual, 1e-12);
  }
}

TEST(Battery, ContainsTheProofMatrices) {
  const auto b = default_test_battery(3, 1);
  EXPECT_EQ(b.size(), 4u + 3u + 2u + 20u);
  EXPECT_EQ(b[5], Matrix::diagonal({2.0, 0.5, 1.0}));
  EXPECT_EQ(default_test_battery(3, 9), default_test_battery(3, 9));
  EXPECT_EQ(default_test_battery(2, 1).front().rows(), 2);
  EXPECT_THROW(default_test_battery(4, 1), DimensionError);
}

TEST(Jensen, FrobeniusFamily) {
  const auto q = default_rule(3);
  const Matrix a = Matrix::diagonal({1.0, 2.0, 1.0});
  EXPECT_GT(frobenius_jensen_margin(ScalarProfile::power(1.0, 2.0), a, q), 0.0);
  EXPECT_LT(frobenius_jensen_margin(ScalarProfile::power(-1.0, 2.0), a, q), 0.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const double scale = 1.0 + 9.0 * std::pow(t, 4);  // g(|tI|^2)
    EXPECT_NEAR(frobenius_jensen_margin(ScalarProfile::power(1.0, 2.0), t * Matrix::identity(3), q), 0.0, 1e-10 * scale);
  }
}

TEST(Jensen, CofactorFamily) {
  const auto q = default_rule(3);
  const auto g = ScalarProfile::power(1.0, 2.0);
  for (double l : {1.5, 2.0, 4.0}) {
    const Matrix a = Matrix::diagonal({l, 1.0 / l, 1.0});
    EXPECT_GE(cofactor_jensen_margin(g, a, q), 0.0);
    EXPECT_LT(cofactor_necessity_margin(g, a), 0.0);
  }
  EXPECT_THROW(cofactor_necessity_margin(g, Matrix::identity(2)), DimensionError);
}

TEST(Jensen, SuiteMatchesExpectations) {
  const auto rep = jensen_counterexample_suite(3, default_rule(3));
  EXPECT_TRUE(rep.all_match);
  EXPECT_FALSE(rep.entries.empty());
  EXPECT_TRUE(jensen_counterexample_suite(2, default_rule(2)).all_match);
}

TEST(CubicConstant, AttainedAtScaledRotations) {
  const double c = cubic_norm_constant(default_rule(3));
  EXPECT_NEAR(c, std::pow(3.0, -1.5), 1e-10);
}

TEST(IncreasingThreshold, Examples) {
  EXPECT_EQ(increasing_threshold(ScalarProfile::well()), 1.0);
  EXPECT_EQ(increasing_threshold(ScalarProfile::zero()), 1.0);
  EXPECT_NEAR(increasing_threshold(ScalarProfile::well(1.0)), 1.0, 0.0);
  const auto dip = ScalarProfile::custom("dip", [](double t) { return ExtendedReal((t - 3.0) * (t - 3.0)); });
  EXPECT_NEAR(increasing_threshold(dip), 3.0, 0.2);
}

TEST(MooneyRivlinScan, CofactorBranch) {
  const std::vector<double> stretches{1, 1.5, 2, 3, 5, 10, 20, 50, 100};
  const auto rep = mooney_rivlin_inequality_check(1.0, 1.0, ScalarProfile::zero(), stretches, default_rule(3));
  ASSERT_TRUE(rep.lambda_star.has_value());
  EXPECT_LE(*rep.lambda_star, 100.0);
  EXPECT_FALSE(rep.inconclusive);
  EXPECT_EQ(rep.branch, "beta>0");
  EXPECT_EQ(rep.rows.size(), stretches.size());
  // Large stretches always fail: the lhs grows like l^2, the rhs like l^4.
  EXPECT_TRUE(rep.rows.back().violated);
}

TEST(MooneyRivlinScan, DeterminantBranch) {
  const auto rep = mooney_rivlin_inequality_check(1.0, 0.0, ScalarProfile::well(), {1, 2, 5, 10}, default_rule(3));
  ASSERT_TRUE(rep.lambda_star.has_value());
  EXPECT_EQ(rep.branch, "beta=0");
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.valid_region);
    EXPECT_LT(row.branch_lhs, row.branch_rhs);
  }
}

TEST(MooneyRivlinScan, RejectsBadInput) {
  EXPECT_THROW(mooney_rivlin_inequality_check(1.0, -1.0, ScalarProfile::zero(), {1.0}, default_rule(3)), DomainError);
  EXPECT_THROW(mooney_rivlin_inequality_check(1.0, 1.0, ScalarProfile::zero(), {0.0}, default_rule(3)), DomainError);
}
