#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "perilimit/linalg.hpp"
#include "perilimit/potentials.hpp"
#include "perilimit/quadrature.hpp"

namespace perilimit {

/// Geometric grid t_k = 2^-k, k = first_level..last_level, for the blow-up
/// limit lim_{t->0} t^-beta w(t x~, t y~).
struct BlowupSettings {
  int first_level = 4;
  int last_level = 12;
  /// Richardson passes; pass j removes a c*t^j error term.
  int richardson_passes = 3;
  /// The last two extrapolated values must agree to this relative tolerance.
  double relative_tolerance = 1e-7;
};

struct BlowupSample {
  double t;
  double scaled_value;  // t^-beta w(t x~, t y~)
};

struct BlowupTrace {
  std::vector<BlowupSample> samples;
  double limit = 0.0;
  /// |last - previous| among the fully extrapolated values.
  double cauchy_residual = 0.0;
  bool converged = false;
};

/// Samples and Richardson-extrapolates t^-beta w(t x~, t y~); never throws on
/// divergence, the trace records it.
BlowupTrace blowup_trace(const PairwisePotential& w, double beta, const Vector& ref_bond,
                         const Vector& def_bond, const BlowupSettings& settings = {});

/// Blow-up limit w°(x~, y~). Throws DivergenceError ("no finite blow-up at
/// this beta") when the extrapolated sequence is not Cauchy within tolerance,
/// DomainError for x~ = 0.
double blowup(const PairwisePotential& w, double beta, const Vector& ref_bond, const Vector& def_bond,
              const BlowupSettings& settings = {});

struct BetaEstimate {
  double beta = 0.0;
  /// max - min of the per-sample log-log slopes.
  double slope_spread = 0.0;
  /// Largest deviation of log|w| from its least-squares line, over samples.
  double max_fit_residual = 0.0;
  int samples_used = 0;
};

/// Log-log least-squares slope of |w(t x~, t y~)| against t on the blow-up
/// grid, averaged over random (x~, y~). Throws DomainError ("not
/// asymptotically homogeneous") when slopes vary across samples or the
/// log-log data is not a line, each beyond `tolerance`.
BetaEstimate estimate_beta_detailed(const PairwisePotential& w, int samples, std::uint64_t seed,
                                    int ref_dim = 3, int def_dim = 3, double tolerance = 1e-6);
double estimate_beta(const PairwisePotential& w, int samples, std::uint64_t seed, int ref_dim = 3,
                     int def_dim = 3);

/// The degree-beta homogeneous blow-up w° of a potential, with beta fixed.
class BlowupResult {
 public:
  /// Uses the potential's declared degree; DomainError if none is declared.
  static BlowupResult from_declared(const PairwisePotential& w, int dim = 3);
  /// Uses `beta`. DomainError if the potential declares a different degree.
  static BlowupResult with_beta(const PairwisePotential& w, double beta, int dim = 3,
                                const BlowupSettings& settings = {});
  /// Estimates beta first (estimate_beta), then as with_beta.
  static BlowupResult estimated(const PairwisePotential& w, int samples, std::uint64_t seed, int dim = 3,
                                const BlowupSettings& settings = {});

  [[nodiscard]] double beta() const { return beta_; }
  /// True when w is itself degree-beta homogeneous, so w° = w.
  [[nodiscard]] bool exact() const { return exact_; }
  /// Blow-up trace at the probe pair (e_1, e_1).
  [[nodiscard]] const BlowupTrace& diagnostics() const { return probe_; }
  [[nodiscard]] const PairwisePotential& potential() const { return w_; }

  double operator()(const Vector& ref_bond, const Vector& def_bond) const;

 private:
  BlowupResult(PairwisePotential w, double beta, bool exact, BlowupSettings settings, BlowupTrace probe)
      : w_(std::move(w)), beta_(beta), exact_(exact), settings_(settings), probe_(std::move(probe)) {}

  PairwisePotential w_;
  double beta_;
  bool exact_;
  BlowupSettings settings_;
  BlowupTrace probe_;
};

/// Local density w̄(A) = integral over S^{n-1} of w°(z, A z), with A m x n
/// and n = q.dim().
double local_density(const BlowupResult& blowup, const Matrix& a, const SphereQuadrature& q);

struct InvarianceReport {
  double reference = 0.0;      // w̄(A)
  double max_deviation = 0.0;  // max |w̄(R1 A R2) - w̄(A)|
  double tolerance = 0.0;      // 1e-7 (1 + |w̄(A)|)
  int trials = 0;
  bool passed = false;
};

/// |w̄(R1 A R2) - w̄(A)| for one pair of rotations.
double invariance_deviation(const BlowupResult& blowup, const Matrix& a, const Rotation& post,
                            const Rotation& pre, const SphereQuadrature& q);

/// Frame indifference and isotropy of w̄ over random rotation pairs
/// R1 in SO(m), R2 in SO(n).
InvarianceReport verify_limit_invariances(const BlowupResult& blowup, const Matrix& a, int trials,
                                          std::uint64_t seed, const SphereQuadrature& q);

}  // namespace perilimit
