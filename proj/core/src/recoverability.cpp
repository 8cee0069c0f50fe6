#include "perilimit/recoverability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"
#include "perilimit/parallel.hpp"

namespace perilimit {

namespace {

double finite_or_throw(const ExtendedReal& x, const char* what) {
  if (x.is_infinite()) throw DomainError(std::string(what) + " is +inf");
  return x.value();
}

/// Mean over z of g(|Az|); g may be +inf.
template <class G>
ExtendedReal mean_of_stretch(const Matrix& a, const SphereQuadrature& q, G&& g) {
  return mean_over_sphere(q, [&](const Vector& z) { return g((a * z).norm()); });
}

}  // namespace

ResidualEntry recoverability_residual(const StoredEnergy& w, const Matrix& a, const SphereQuadrature& q) {
  if (!a.is_square()) throw DimensionError("recoverability_residual: A must be square");
  if (a.cols() != q.dim()) throw DimensionError("recoverability_residual: A and the sphere rule differ in dimension");
  const int n = a.rows();
  const Matrix id = Matrix::identity(n);
  ResidualEntry e{a, w(a), mean_of_stretch(a, q, [&](double s) { return w(s * id); }), ResidualStatus::finite, 0.0};
  if (e.lhs.is_finite() && e.rhs.is_finite()) {
    e.residual = e.lhs.value() - e.rhs.value();
  } else if (e.lhs.is_infinite() && e.rhs.is_infinite()) {
    e.status = ResidualStatus::indeterminate;
    e.residual = std::numeric_limits<double>::quiet_NaN();
  } else {
    e.status = ResidualStatus::infinite_violation;
    e.residual = e.lhs.is_infinite() ? HUGE_VAL : -HUGE_VAL;
  }
  return e;
}

// ---------------------------------------------------------------- candidate

CandidateProfile::CandidateProfile(StoredEnergy w, int n) : w_(std::move(w)), n_(n) {
  if (n < 1 || n > kMaxDim) throw DimensionError("extract_candidate: n must be 1..3");
}

ExtendedReal CandidateProfile::operator()(double t) const {
  if (t < 0.0) throw DomainError("candidate profile: t must be >= 0");
  return (1.0 / sphere_measure(n_)) * w_(t * Matrix::identity(n_));
}

ScalarProfile CandidateProfile::as_profile() const {
  CandidateProfile self = *this;
  return ScalarProfile::custom("candidate[" + w_.label() + "]", [self](double t) { return self(t); });
}

PairwisePotential CandidateProfile::as_potential() const { return PairwisePotential::ratio_profile(as_profile()); }

CandidateProfile extract_candidate(const StoredEnergy& w, int n) { return CandidateProfile(w, n); }

// ---------------------------------------------------------------- reports

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent:
      return "consistent";
    case Verdict::violated:
      return "violated";
    case Verdict::infinite_violation:
      return "infinite-violation";
  }
  return "unknown";
}

std::string to_string(ResidualStatus s) {
  switch (s) {
    case ResidualStatus::finite:
      return "finite";
    case ResidualStatus::infinite_violation:
      return "infinite-violation";
    case ResidualStatus::indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

std::vector<Matrix> default_test_battery(int n, std::uint64_t seed, int random_count) {
  if (n != 2 && n != 3) throw DimensionError("default_test_battery: n must be 2 or 3");
  std::vector<Matrix> out;
  for (double t : {0.0, 0.5, 1.0, 2.0}) out.push_back(t * Matrix::identity(n));
  for (double l : {1.5, 2.0, 4.0}) {
    out.push_back(n == 3 ? Matrix::diagonal({l, 1.0 / l, 1.0}) : Matrix::diagonal({l, 1.0 / l}));
  }
  if (n == 3) {
    out.push_back(Matrix::diagonal({1.0, 2.0, 3.0}));
    out.push_back(Matrix::diagonal({0.5, 1.0, 2.0}));
  } else {
    out.push_back(Matrix::diagonal({1.0, 2.0}));
    out.push_back(Matrix::diagonal({0.5, 3.0}));
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < random_count; ++k) out.push_back(random_matrix(n, n, rng, 1.0));
  return out;
}

RecoverabilityReport roundtrip_check(const StoredEnergy& w, const SphereQuadrature& q,
                                     const std::vector<Matrix>& test_set, double tolerance) {
  RecoverabilityReport report;
  report.density = w.label();
  report.density_formula = w.describe();
  report.quadrature = q.description();
  report.tolerance = tolerance;

  const CandidateProfile candidate = extract_candidate(w, q.dim());
  report.entries.resize(test_set.size());
  parallel_for(test_set.size(), [&](std::size_t k) {
    const Matrix& a = test_set[k];
    if (!a.is_square() || a.cols() != q.dim()) {
      throw DimensionError("roundtrip_check: test matrix does not match the sphere rule dimension");
    }
    // Sphere integral of candidate(|Az|) is sigma_{n-1} times its mean.
    const ExtendedReal integral = q.measure() * mean_of_stretch(a, q, candidate);
    ResidualEntry e{a, w(a), integral, ResidualStatus::finite, 0.0};
    if (e.lhs.is_finite() && e.rhs.is_finite()) {
      e.residual = e.lhs.value() - e.rhs.value();
    } else if (e.lhs.is_infinite() && e.rhs.is_infinite()) {
      e.status = ResidualStatus::indeterminate;
      e.residual = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.status = ResidualStatus::infinite_violation;
      e.residual = e.lhs.is_infinite() ? HUGE_VAL : -HUGE_VAL;
    }
    report.entries[k] = std::move(e);
  });

  bool violated = false, infinite = false;
  report.exceeds.assign(report.entries.size(), 0);
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const auto& e = report.entries[k];
    switch (e.status) {
      case ResidualStatus::finite: {
        const double r = std::abs(e.residual);
        report.max_abs_residual = std::max(report.max_abs_residual, r);
        if (r > tolerance * (1.0 + std::abs(e.lhs.value()))) {
          report.exceeds[k] = 1;
          violated = true;
        }
        break;
      }
      case ResidualStatus::infinite_violation:
        infinite = true;
        break;
      case ResidualStatus::indeterminate:
        ++report.indeterminate;
        break;
    }
  }
  report.verdict = infinite ? Verdict::infinite_violation : (violated ? Verdict::violated : Verdict::consistent);
  return report;
}

// ---------------------------------------------------------------- Jensen suite

double frobenius_jensen_margin(const ScalarProfile& g, const Matrix& a, const SphereQuadrature& q) {
  const double n = a.cols();
  const ExtendedReal mean = mean_of_stretch(a, q, [&](double s) { return g(n * s * s); });
  return finite_or_throw(mean, "frobenius_jensen_margin: mean") -
         finite_or_throw(g(frobenius_squared(a)), "frobenius_jensen_margin: g(|A|^2)");
}

double cofactor_jensen_margin(const ScalarProfile& g, const Matrix& a, const SphereQuadrature& q) {
  if (a.rows() != 3 || a.cols() != 3) throw DimensionError("cofactor_jensen_margin: A must be 3x3");
  const double r3 = std::sqrt(3.0);
  const ExtendedReal mean = mean_of_stretch(a, q, [&](double s) { return g(r3 * s * s); });
  return finite_or_throw(mean, "cofactor_jensen_margin: mean") -
         finite_or_throw(g(frobenius_squared(a) / r3), "cofactor_jensen_margin: g(|A|^2/sqrt 3)");
}

double cofactor_necessity_margin(const ScalarProfile& g, const Matrix& a) {
  if (a.rows() != 3 || a.cols() != 3) throw DimensionError("cofactor_necessity_margin: A must be 3x3");
  return finite_or_throw(g(frobenius(cofactor(a))), "g(|cof A|)") -
         finite_or_throw(g(frobenius_squared(a) / std::sqrt(3.0)), "g(|A|^2/sqrt 3)");
}

JensenSuiteReport jensen_counterexample_suite(int n, const SphereQuadrature& q, const std::vector<double>& stretches) {
  if (n != q.dim()) throw DimensionError("jensen_counterexample_suite: n differs from the sphere rule");
  constexpr double eq_tol = 1e-10;
  JensenSuiteReport report;
  const Matrix stretched = n == 3 ? Matrix::diagonal({1.0, 2.0, 1.0}) : Matrix::diagonal({1.0, 2.0});
  const Matrix id = Matrix::identity(n);

  auto add = [&](std::string family, std::string statement, const ScalarProfile& g, const Matrix& a, double lhs,
                 double rhs, std::string expectation) {
    JensenEntry e{std::move(family), std::move(statement), g.describe(), a, lhs, rhs, lhs - rhs, std::move(expectation),
                  false};
    if (e.expectation == "> 0") e.matches = e.margin > eq_tol;
    if (e.expectation == "< 0") e.matches = e.margin < -eq_tol;
    if (e.expectation == "= 0") e.matches = std::abs(e.margin) <= eq_tol;
    if (e.expectation == ">= 0") e.matches = e.margin >= -eq_tol;
    report.entries.push_back(std::move(e));
  };

  const ScalarProfile convex = ScalarProfile::power(1.0, 2.0);
  const ScalarProfile concave = ScalarProfile::power(-1.0, 2.0);
  const std::string stmt = "mean g(n|Az|^2) vs g(|A|^2)";
  for (const auto& [g, sign] : {std::pair{convex, std::string("> 0")}, std::pair{concave, std::string("< 0")}}) {
    for (const Matrix* a : {&stretched, &id}) {
      const double n_d = n;
      const double lhs = mean_of_stretch(*a, q, [&](double s) { return g(n_d * s * s); }).value();
      const double rhs = g(frobenius_squared(*a)).value();
      add("frobenius-profile", stmt, g, *a, lhs, rhs, a == &id ? "= 0" : sign);
    }
  }

  if (n == 3) {
    const double r3 = std::sqrt(3.0);
    for (double l : stretches) {
      const Matrix a = Matrix::diagonal({l, 1.0 / l, 1.0});
      const double lhs = mean_of_stretch(a, q, [&](double s) { return convex(r3 * s * s); }).value();
      const double rhs = convex(frobenius_squared(a) / r3).value();
      add("cofactor-profile", "mean g(sqrt3|Az|^2) vs g(|A|^2/sqrt3)", convex, a, lhs, rhs, l == 1.0 ? "= 0" : ">= 0");
      const double nec_lhs = convex(frobenius(cofactor(a))).value();
      add("cofactor-profile", "g(|cof A|) vs g(|A|^2/sqrt3)", convex, a, nec_lhs, rhs, l == 1.0 ? "= 0" : "< 0");
    }
  }
  report.all_match = std::all_of(report.entries.begin(), report.entries.end(), [](const auto& e) { return e.matches; });
  return report;
}

// ---------------------------------------------------------------- Mooney-Rivlin scan

double increasing_threshold(const ScalarProfile& g) {
  constexpr int kFirst = 0, kLast = 160;  // t from 1 to 2^10
  double a = 1.0;
  double prev = g(1.0).to_double();
  for (int k = kFirst + 1; k <= kLast; ++k) {
    const double t = std::exp2(k / 16.0);
    const double v = g(t).to_double();
    if (v < prev) a = t;
    prev = v;
  }
  return a;
}

double cubic_norm_constant(const SphereQuadrature& q, int octant_grid, int random_samples, std::uint64_t seed) {
  if (q.dim() != 3) throw DimensionError("cubic_norm_constant: needs a rule on S^2");
  auto cubic_mean = [&](const Matrix& a) {
    return mean_over_sphere(q, [&](const Vector& z) {
             const double s = (a * z).norm();
             return ExtendedReal(s * s * s);
           })
        .value();
  };
  const double half_pi = std::acos(0.0);
  std::vector<Matrix> samples;
  for (int i = 0; i <= octant_grid; ++i) {
    for (int j = 0; j <= octant_grid; ++j) {
      const double th = half_pi * i / octant_grid, ph = half_pi * j / octant_grid;
      samples.push_back(Matrix::diagonal({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}));
    }
  }
  samples.push_back((1.0 / std::sqrt(3.0)) * Matrix::identity(3));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < random_samples; ++k) {
    Matrix a = random_matrix(3, 3, rng, 1.0);
    const double nrm = frobenius(a);
    if (nrm > 1e-12) samples.push_back((1.0 / nrm) * a);
  }
  std::vector<double> values(samples.size());
  parallel_for(samples.size(), [&](std::size_t k) { values[k] = cubic_mean(samples[k]); });
  return *std::min_element(values.begin(), values.end());
}

MooneyRivlinScanReport mooney_rivlin_inequality_check(double alpha, double beta, const ScalarProfile& g,
                                                      const std::vector<double>& stretches,
                                                      const SphereQuadrature& q) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("mooney_rivlin_inequality_check: alpha, beta must be >= 0");
  MooneyRivlinScanReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.profile = g.describe();
  report.branch = beta > 0.0 ? "beta>0" : "beta=0";
  report.threshold_a = increasing_threshold(g);
  report.c_sampled = cubic_norm_constant(q);
  report.c = std::min(report.c_sampled, 1.0 / (report.threshold_a * report.threshold_a));

  const double ratio = report.threshold_a / report.c;
  const double third = std::cbrt(ratio);
  const double k = third * third;
  for (double l : stretches) {
    if (!(l > 0.0)) throw DomainError("mooney_rivlin_inequality_check: stretches must be positive");
    const Matrix a = Matrix::diagonal({l, 1.0 / l, third});
    const double norm2 = frobenius_squared(a);  // l^2 + l^-2 + (a/c)^(2/3)
    MooneyRivlinScanRow row;
    row.lambda = l;
    const double g_det = g(determinant(a)).to_double();
    const double g_cubic = g(report.c * std::pow(norm2, 1.5)).to_double();
    row.lhs = beta * (1.0 + k * (l * l + 1.0 / (l * l))) + g_det;
    row.rhs = beta / 3.0 * norm2 * norm2 + g_cubic;
    if (beta > 0.0) {
      row.branch_lhs = row.lhs;
      row.branch_rhs = beta / 3.0 * norm2 * norm2;
    } else {
      row.branch_lhs = g_det;
      row.branch_rhs = g_cubic;
    }
    row.valid_region = report.c * std::pow(norm2, 1.5) >= report.threshold_a * (1.0 - 1e-12);
    row.violated = row.valid_region && row.branch_lhs < row.branch_rhs;
    if (row.violated && !report.lambda_star) report.lambda_star = l;
    report.rows.push_back(row);
  }
  report.inconclusive = !report.lambda_star.has_value();
  return report;
}

}  // namespace perilimit
