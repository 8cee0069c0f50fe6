#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "perilimit/convexify.hpp"
#include "perilimit/errors.hpp"

using namespace perilimit;

namespace {

StoredEnergy double_well() {
  // (|A|^2 - 1)^2; on 1x1 matrices this is (a^2 - 1)^2.
  return make_frobenius_profile(ScalarProfile::well());
}

std::size_t index_of(const MatrixLattice& lat, const Matrix& m) {
  for (std::size_t p = 0; p < lat.size(); ++p) {
    if (max_abs_diff(lat.matrix_at(p), m) < 1e-12) return p;
  }
  return lat.size();
}

}  // namespace

TEST(Lattice, ContainsZeroAndIdentity) {
  for (auto sub : {LatticeSubspace::full, LatticeSubspace::diagonal}) {
    const MatrixLattice lat(2, 2.0, 0.25, sub);
    EXPECT_LT(index_of(lat, Matrix(2, 2)), lat.size());
    const std::size_t id = index_of(lat, Matrix::identity(2));
    ASSERT_LT(id, lat.size());
    EXPECT_EQ(lat.matrix_at(id), Matrix::identity(2));
    EXPECT_EQ(lat.flat_index(lat.multi_index(id)), id);
  }
  const MatrixLattice diag(3, 3.0, 0.1, LatticeSubspace::diagonal);
  EXPECT_EQ(diag.axis_points(), 61);
  EXPECT_EQ(diag.size(), 61u * 61u * 61u);
}

TEST(Lattice, RejectsIncompatibleSpacing) {
  EXPECT_THROW(MatrixLattice(2, 2.0, 0.3, LatticeSubspace::full), DomainError);
  EXPECT_THROW(MatrixLattice(2, 0.5, 0.1, LatticeSubspace::full), DomainError);
  EXPECT_THROW(MatrixLattice(3, 3.0, 0.01, LatticeSubspace::full), DomainError);
  EXPECT_THROW(MatrixLattice(4, 2.0, 0.5, LatticeSubspace::full), DimensionError);
}

TEST(Directions, DiagonalSublatticeKeepsAxes) {
  const MatrixLattice lat(3, 2.0, 0.5, LatticeSubspace::diagonal);
  const auto dirs = rank_one_directions(lat, 10, 1);
  EXPECT_EQ(dirs.size(), 3u);
  const MatrixLattice full(2, 2.0, 0.5, LatticeSubspace::full);
  const auto all = rank_one_directions(full, 0, 1);
  for (const auto& d : all) EXPECT_NEAR(determinant(outer(d.a, d.b)), 0.0, 0.0);
  EXPECT_GT(all.size(), 4u);
  EXPECT_GE(rank_one_directions(full, 20, 3).size(), all.size());
}

TEST(LowerEnvelope1d, HullAndInfinity) {
  const std::vector<double> v{4.0, 0.0, 3.0, 0.0, 4.0};
  const auto env = lower_convex_envelope_1d(v);
  EXPECT_EQ(env, (std::vector<double>{4.0, 0.0, 0.0, 0.0, 4.0}));
  const std::vector<double> w{HUGE_VAL, 1.0, 5.0, 3.0, HUGE_VAL};
  const auto e2 = lower_convex_envelope_1d(w);
  EXPECT_TRUE(std::isinf(e2[0]));
  EXPECT_EQ(e2[2], 2.0);
  EXPECT_TRUE(std::isinf(e2[4]));
}

TEST(Convexify, ConvexDensityIsAFixedPoint) {
  const MatrixLattice lat(3, 3.0, 0.1, LatticeSubspace::diagonal);
  const auto env = rank_one_convexify(make_frobenius_squared(), lat);
  EXPECT_TRUE(env.converged);
  EXPECT_LE(env.max_interior_change(), 1e-5);
  for (std::size_t p = 0; p < lat.size(); ++p) EXPECT_LE(env.envelope[p], env.original[p]);
}

TEST(Convexify, MooneyRivlinIsAFixedPoint) {
  const MatrixLattice lat(3, 3.0, 0.1, LatticeSubspace::diagonal);
  const auto env = rank_one_convexify(make_mooney_rivlin(1.0, 1.0, ScalarProfile::well()), lat);
  EXPECT_TRUE(env.converged);
  EXPECT_LE(env.max_interior_change(), 1e-5);
}

TEST(Convexify, FullTwoByTwoLattice) {
  const MatrixLattice lat(2, 1.0, 0.5, LatticeSubspace::full);
  const auto env = rank_one_convexify(make_mooney_rivlin(1.0, 1.0, ScalarProfile::well()), lat);
  EXPECT_TRUE(env.converged);
  EXPECT_LE(env.max_interior_change(), 1e-5);
}

TEST(Convexify, DoubleWellMatchesConvexEnvelope) {
  const MatrixLattice lat(1, 2.0, 0.01, LatticeSubspace::full);
  const auto env = rank_one_convexify(double_well(), lat);
  EXPECT_TRUE(env.converged);
  for (std::size_t p = 0; p < lat.size(); ++p) {
    const double a = lat.matrix_at(p)(0, 0);
    const double exact = std::abs(a) <= 1.0 ? 0.0 : (a * a - 1.0) * (a * a - 1.0);
    EXPECT_NEAR(env.envelope[p], exact, 1e-4) << a;
  }
}

TEST(Convexify, SandwichedBetweenConvexAndLineEnvelopes) {
  const MatrixLattice lat(2, 2.0, 0.1, LatticeSubspace::diagonal);
  const auto env = rank_one_convexify(double_well(), lat);
  const int m = lat.axis_points();
  for (std::size_t p = 0; p < lat.size(); ++p) {
    const Matrix a = lat.matrix_at(p);
    const double r2 = frobenius_squared(a);
    const double convex = r2 <= 1.0 ? 0.0 : (r2 - 1.0) * (r2 - 1.0);
    EXPECT_GE(env.envelope[p], convex - 1e-12);
    EXPECT_LE(env.envelope[p], env.original[p]);
  }
  // Along each axis line the envelope lies below the one-dimensional hull.
  for (int fixed = 0; fixed < m; ++fixed) {
    std::vector<double> row(static_cast<std::size_t>(m)), rc(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const std::vector<int> idx{fixed, k};
      const std::size_t p = lat.flat_index(idx);
      row[static_cast<std::size_t>(k)] = env.original[p];
      rc[static_cast<std::size_t>(k)] = env.envelope[p];
    }
    const auto hull = lower_convex_envelope_1d(row);
    for (int k = 0; k < m; ++k) EXPECT_LE(rc[static_cast<std::size_t>(k)], hull[static_cast<std::size_t>(k)] + 1e-12);
  }
}

TEST(Convexify, SweepsAreMonotone) {
  const MatrixLattice lat(2, 2.0, 0.1, LatticeSubspace::diagonal);
  ConvexifySettings one;
  one.max_sweeps = 1;
  ConvexifySettings two = one;
  two.max_sweeps = 2;
  const auto e1 = rank_one_convexify(double_well(), lat, one);
  const auto e2 = rank_one_convexify(double_well(), lat, two);
  for (std::size_t p = 0; p < lat.size(); ++p) {
    EXPECT_LE(e1.envelope[p], e1.original[p]);
    EXPECT_LE(e2.envelope[p], e1.envelope[p]);
  }
}

TEST(Convexify, NonConvergenceIsFlagged) {
  const MatrixLattice lat(2, 2.0, 0.1, LatticeSubspace::diagonal);
  ConvexifySettings s;
  s.max_sweeps = 1;
  s.tolerance = 0.0;
  EXPECT_FALSE(rank_one_convexify(double_well(), lat, s).converged);
}

TEST(Convexify, InfiniteValuesNeverMix) {
  const MatrixLattice lat(3, 2.0, 0.5, LatticeSubspace::diagonal);
  const auto env = rank_one_convexify(make_incompressible_mr(1.0, 1.0), lat);
  for (std::size_t p = 0; p < lat.size(); ++p) {
    if (std::isinf(env.original[p])) {
      EXPECT_TRUE(std::isinf(env.envelope[p]));
    } else {
      EXPECT_EQ(env.envelope[p], env.original[p]);
    }
  }
}

TEST(Convexify, RejectsNan) {
  const MatrixLattice lat(1, 1.0, 0.5, LatticeSubspace::full);
  EXPECT_THROW(rank_one_convexify_values({0.0, std::nan(""), 0.0, 0.0, 0.0}, lat), DomainError);
  EXPECT_THROW(rank_one_convexify_values({0.0}, lat), DimensionError);
}

TEST(Convexify, CsvLayout) {
  const MatrixLattice lat(1, 1.0, 0.5, LatticeSubspace::full);
  const auto env = rank_one_convexify(double_well(), lat);
  std::ostringstream os;
  write_envelope_csv(os, env);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "c0,f,envelope,interior");
  EXPECT_EQ(first, "-1,0,0,0");
}

TEST(PolyconvexityProbe, Examples) {
  EXPECT_TRUE(strict_polyconvexity_probe(make_frobenius_squared(), 1000, 1).passed);
  const auto neg = StoredEnergy::custom("-|A|^2", [](const Matrix& a) { return ExtendedReal(-frobenius_squared(a)); });
  const auto r = strict_polyconvexity_probe(neg, 200, 1);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.convexity_violations, 0);
  const auto mr = strict_polyconvexity_probe(make_mooney_rivlin(1.0, 1.0, ScalarProfile::well()), 10000, 2);
  EXPECT_TRUE(mr.passed);
  EXPECT_EQ(mr.strictness_violations, 0);
  EXPECT_LT(mr.max_minor_defect, 1e-9);
  EXPECT_TRUE(strict_polyconvexity_probe(make_mooney_rivlin(1.0, 1.0, ScalarProfile::well()), 2000, 3, 2).passed);
}

TEST(JensenGap, Examples) {
  const Matrix a = Matrix::diagonal({1.0, 2.0, 0.5});
  const std::vector<Atom> dirac{{1.0, a}};
  EXPECT_EQ(jensen_gap(make_frobenius_squared(), a, dirac).value(), 0.0);

  const Vector u{1.0, -2.0, 0.0}, v{0.5, 0.0, 3.0};
  const double lambda = 0.3;
  const auto nu = laminate(a, outer(u, v), lambda);
  const double expected = lambda * (1.0 - lambda) * u.norm_squared() * v.norm_squared();
  EXPECT_NEAR(jensen_gap(make_frobenius_squared(), a, nu).value(), expected, 1e-12);

  const auto linear = StoredEnergy::custom("trace", [](const Matrix& m) { return ExtendedReal(m(0, 0) + m(1, 1) + m(2, 2)); });
  EXPECT_NEAR(jensen_gap(linear, a, nu).value(), 0.0, 1e-14);

  const std::vector<Atom> off{{0.5, a}, {0.5, 2.0 * a}};
  EXPECT_THROW(jensen_gap(make_frobenius_squared(), a, off), DomainError);
  const std::vector<Atom> light{{0.4, a}, {0.4, a}};
  EXPECT_THROW(jensen_gap(make_frobenius_squared(), a, light), DomainError);
  EXPECT_THROW(laminate(a, a, 1.0), DomainError);
}
