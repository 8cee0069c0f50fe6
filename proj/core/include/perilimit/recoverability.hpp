#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "perilimit/extended_real.hpp"
#include "perilimit/linalg.hpp"
#include "perilimit/potentials.hpp"
#include "perilimit/profile.hpp"
#include "perilimit/quadrature.hpp"

namespace perilimit {

/// How W(A) compares with its sphere mean of W(|Az| I).
enum class ResidualStatus {
  finite,              // both sides finite
  infinite_violation,  // exactly one side is +inf
  indeterminate,       // both sides +inf
};

struct ResidualEntry {
  Matrix a;
  ExtendedReal lhs;  // W(A)
  ExtendedReal rhs;  // mean over z in S^{n-1} of W(|Az| I)
  ResidualStatus status = ResidualStatus::finite;
  /// lhs - rhs when finite, +-inf for an infinite violation, NaN when indeterminate.
  double residual = 0.0;
};

/// W(A) minus the sphere mean of z -> W(|Az| I). A W obtained as the local
/// density of an isotropic, frame-indifferent bond potential makes this zero
/// for every A; a nonzero residual at any A rules that out.
ResidualEntry recoverability_residual(const StoredEnergy& w, const Matrix& a, const SphereQuadrature& q);

/// The only radial bond profile that can produce W: t -> W(t I) / sigma_{n-1}.
class CandidateProfile {
 public:
  CandidateProfile(StoredEnergy w, int n);

  ExtendedReal operator()(double t) const;
  [[nodiscard]] int dim() const { return n_; }
  /// As a ScalarProfile (custom kind).
  [[nodiscard]] ScalarProfile as_profile() const;
  /// As the degree-0 bond potential w(x~, y~) = candidate(|y~| / |x~|).
  [[nodiscard]] PairwisePotential as_potential() const;

 private:
  StoredEnergy w_;
  int n_;
};

CandidateProfile extract_candidate(const StoredEnergy& w, int n);

enum class Verdict { consistent, violated, infinite_violation };
std::string to_string(Verdict v);
std::string to_string(ResidualStatus s);

struct RecoverabilityReport {
  std::string density;  // label
  std::string density_formula;
  std::string quadrature;
  double tolerance = 1e-6;  // relative: |residual| <= tolerance (1 + |W(A)|)
  std::vector<ResidualEntry> entries;
  std::vector<char> exceeds;  // per entry: finite residual beyond tolerance
  double max_abs_residual = 0.0;  // over finite entries
  int indeterminate = 0;
  Verdict verdict = Verdict::consistent;
};

inline constexpr double kRecoverabilityTolerance = 1e-6;

/// Test matrices for roundtrip_check: multiples of I, diag(l, 1/l, 1) for
/// l in {1.5, 2, 4}, distinct diagonals, and `random_count` seeded matrices
/// with entries in [-1, 1]. For n = 2 the stretch family is diag(l, 1/l).
std::vector<Matrix> default_test_battery(int n, std::uint64_t seed, int random_count = 20);

/// Builds the candidate profile from W, integrates it against |Az| over the
/// sphere at each test matrix and compares with W(A).
RecoverabilityReport roundtrip_check(const StoredEnergy& w, const SphereQuadrature& q,
                                     const std::vector<Matrix>& test_set,
                                     double tolerance = kRecoverabilityTolerance);

/// One Jensen-inequality instance from the counterexample families.
struct JensenEntry {
  std::string family;     // "frobenius-profile" or "cofactor-profile"
  std::string statement;  // which inequality
  std::string profile;    // g
  Matrix a;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;      // lhs - rhs
  std::string expectation;  // "> 0", "< 0", "= 0", ">= 0"
  bool matches = false;
};

struct JensenSuiteReport {
  std::vector<JensenEntry> entries;
  bool all_match = false;
};

/// mean over z of g(n |Az|^2) minus g(|A|^2). Recoverability of g(|A|^2)
/// forces this to vanish; strict convexity (concavity) of g makes it
/// positive (negative) whenever |Az| is not constant on the sphere.
double frobenius_jensen_margin(const ScalarProfile& g, const Matrix& a, const SphereQuadrature& q);

/// mean over z of g(sqrt(3) |Az|^2) minus g(|A|^2 / sqrt(3)), n = 3. Jensen
/// bound for convex g.
double cofactor_jensen_margin(const ScalarProfile& g, const Matrix& a, const SphereQuadrature& q);

/// g(|cof A|) minus g(|A|^2 / sqrt(3)), n = 3: recoverability of g(|cof A|)
/// with g convex requires this to be >= 0.
double cofactor_necessity_margin(const ScalarProfile& g, const Matrix& a);

/// Runs the frobenius-profile family with g = t^2 and g = -t^2 at diag(1, 2, ...)
/// and at I; for n = 3 also the cofactor family at diag(l, 1/l, 1).
JensenSuiteReport jensen_counterexample_suite(int n, const SphereQuadrature& q,
                                              const std::vector<double>& stretches = {1.0, 1.5, 2.0, 4.0});

/// Smallest grid point a >= 1 (on t = 2^(k/16)) past which g is
/// nondecreasing up to t = 2^10.
double increasing_threshold(const ScalarProfile& g);

/// min over |A| = 1 of the sphere mean of |Az|^3, n = 3. By rotation
/// invariance only the singular values matter; they are sampled on a grid of
/// the unit octant, together with `random_samples` seeded full matrices.
double cubic_norm_constant(const SphereQuadrature& q, int octant_grid = 40, int random_samples = 200,
                           std::uint64_t seed = 7);

struct MooneyRivlinScanRow {
  double lambda = 0.0;
  double lhs = 0.0;         // beta |cof A|^2 + g(det A)
  double rhs = 0.0;         // beta/3 |A|^4 + g(c |A|^3)
  double branch_lhs = 0.0;  // lhs of the branch inequality actually used
  double branch_rhs = 0.0;
  bool valid_region = false;  // c |A|^3 >= a
  bool violated = false;      // branch_lhs < branch_rhs
};

struct MooneyRivlinScanReport {
  double alpha = 0.0;
  double beta = 0.0;
  std::string profile;
  std::string branch;  // "beta>0" or "beta=0"
  double threshold_a = 1.0;
  double c_sampled = 0.0;
  double c = 0.0;  // min(c_sampled, a^-2)
  std::vector<MooneyRivlinScanRow> rows;
  std::optional<double> lambda_star;
  bool inconclusive = true;
};

/// Evaluates, at A = diag(l, 1/l, (a/c)^(1/3)), the inequality that
/// recoverability of alpha |A|^2 + beta |cof A|^2 + g(det A) would force,
///   beta |cof A|^2 + g(det A) >= beta/3 |A|^4 + g(c |A|^3),
/// and reports the first l where it fails. With beta > 0 the g(c|A|^3)
/// term is dropped; with beta = 0 only the g terms remain.
MooneyRivlinScanReport mooney_rivlin_inequality_check(double alpha, double beta, const ScalarProfile& g,
                                                      const std::vector<double>& stretches,
                                                      const SphereQuadrature& q);

}  // namespace perilimit
