#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "perilimit/extended_real.hpp"
#include "perilimit/linalg.hpp"
#include "perilimit/potentials.hpp"

namespace perilimit {

/// Which matrices the lattice discretizes: all of R^{n x n}, or only the
/// diagonal matrices (an n-dimensional sublattice).
enum class LatticeSubspace { full, diagonal };

/// Uniform grid of n x n matrices with entries (or diagonal entries) in
/// {-L, -L + h, ..., L}. L/h and 1/h must be integers so that 0, 1 and -1
/// (hence the zero matrix and I) are lattice points.
class MatrixLattice {
 public:
  MatrixLattice(int n, double bound, double step, LatticeSubspace subspace);

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double bound() const { return bound_; }
  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] LatticeSubspace subspace() const { return subspace_; }
  /// Grid points per coordinate, 2L/h + 1.
  [[nodiscard]] int axis_points() const { return axis_points_; }
  /// Number of free coordinates: n*n (full) or n (diagonal).
  [[nodiscard]] int coordinates() const { return coordinates_; }
  [[nodiscard]] std::size_t size() const { return size_; }

  [[nodiscard]] double coordinate_value(int i) const { return -bound_ + i * step_; }
  [[nodiscard]] std::vector<int> multi_index(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(std::span<const int> multi) const;
  [[nodiscard]] Matrix matrix_at(std::size_t flat) const;

  static constexpr std::size_t kMaxPoints = 50'000'000;

 private:
  int n_;
  double bound_;
  double step_;
  LatticeSubspace subspace_;
  int axis_points_;
  int coordinates_;
  std::size_t size_;
};

/// Rank-one direction a (x) b with small integer a, b; `offsets` is the
/// lattice index step per coordinate.
struct RankOneDirection {
  Vector a;
  Vector b;
  std::vector<int> offsets;
};

/// All a (x) b with a, b in {-1, 0, 1}^n plus `extra_random` seeded pairs
/// from {-2, ..., 2}^n, up to sign, deduplicated, and restricted to
/// directions that stay inside the lattice subspace.
std::vector<RankOneDirection> rank_one_directions(const MatrixLattice& lattice, int extra_random,
                                                  std::uint64_t seed);

struct EnvelopeResult {
  MatrixLattice lattice;
  std::vector<RankOneDirection> directions;
  std::vector<double> original;  // f on the lattice, +inf allowed
  std::vector<double> envelope;  // f^rc on the lattice
  std::vector<char> interior;    // 1 where boundary truncation cannot matter
  int sweeps = 0;
  double last_decrement = 0.0;
  bool converged = false;

  /// max |f^rc - f| over interior points where f is finite.
  [[nodiscard]] double max_interior_change() const;
  [[nodiscard]] std::size_t interior_count() const;
};

struct ConvexifySettings {
  int extra_directions = 0;
  double tolerance = 1e-6;
  int max_sweeps = 100;
  std::uint64_t seed = 1;
};

/// Rank-one convex envelope on the lattice by iterated sweeps. Each sweep
/// replaces every value by the minimum, over directions, of the lower convex
/// hull of the previous sweep's values along the lattice line through it;
/// in one dimension that hull is the minimal two-point convex combination.
/// Stops when the largest decrement is <= tolerance (converged = true) or
/// after max_sweeps (converged = false).
EnvelopeResult rank_one_convexify(const StoredEnergy& f, const MatrixLattice& lattice,
                                  const ConvexifySettings& settings = {});

/// Same, for lattice values already computed (size must match).
EnvelopeResult rank_one_convexify_values(std::vector<double> values, const MatrixLattice& lattice,
                                         const ConvexifySettings& settings = {});

/// Lower convex envelope of samples y_k at equispaced positions k; +inf
/// samples are skipped, and positions outside the finite range stay +inf.
std::vector<double> lower_convex_envelope_1d(std::span<const double> values);

/// CSV: one row per lattice point, columns c0..c{k-1}, f, envelope, interior.
void write_envelope_csv(std::ostream& os, const EnvelopeResult& result);

struct PolyconvexityProbeReport {
  int trials = 0;
  int skipped_infinite = 0;
  /// f(mid) > mean of endpoints along a rank-one segment.
  int convexity_violations = 0;
  /// f(mid) not strictly below the mean (includes convexity violations).
  int strictness_violations = 0;
  /// Largest f(mid) - mean(f(ends)); negative when strictly convex.
  double worst_gap = 0.0;
  /// Largest deviation of the minors at the midpoint from the mean minors.
  double max_minor_defect = 0.0;
  bool passed = false;
};

/// Necessary-condition sampler for strict polyconvexity. Along rank-one
/// segments [A - B, A + B] all minors are affine, so for f = g(minors) with g
/// strictly convex, f(A) < (f(A - B) + f(A + B)) / 2. Violations refute
/// strict polyconvexity; no violations is evidence only.
PolyconvexityProbeReport strict_polyconvexity_probe(const StoredEnergy& f, int trials, std::uint64_t seed,
                                                    int n = 3);

struct Atom {
  double weight;
  Matrix point;
};

/// Integral of f against the discrete measure minus f(A). Weights must be
/// positive and sum to 1; the barycenter must equal A within 1e-10.
ExtendedReal jensen_gap(const StoredEnergy& f, const Matrix& a, std::span<const Atom> measure);

/// Two-point laminate lambda delta_{A + (1 - lambda) B} + (1 - lambda) delta_{A - lambda B}.
std::vector<Atom> laminate(const Matrix& a, const Matrix& b, double lambda);

}  // namespace perilimit
