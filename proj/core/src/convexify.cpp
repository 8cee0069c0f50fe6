#include "perilimit/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"
#include "perilimit/parallel.hpp"

namespace perilimit {

namespace {

bool is_integer_ratio(double num, double den) {
  const double r = num / den;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

}  // namespace

// ---------------------------------------------------------------- MatrixLattice

MatrixLattice::MatrixLattice(int n, double bound, double step, LatticeSubspace subspace)
    : n_(n), bound_(bound), step_(step), subspace_(subspace) {
  if (n < 1 || n > kMaxDim) throw DimensionError("MatrixLattice: n must be 1..3");
  if (!(step > 0.0)) throw DomainError("MatrixLattice: step must be positive");
  if (!(bound >= 1.0)) throw DomainError("MatrixLattice: bound must be >= 1 so that I is a lattice point");
  if (!is_integer_ratio(bound, step) || !is_integer_ratio(1.0, step)) {
    throw DomainError("MatrixLattice: bound/step and 1/step must be integers (bound " + format_double(bound) +
                      ", step " + format_double(step) + ")");
  }
  axis_points_ = 2 * static_cast<int>(std::lround(bound / step)) + 1;
  coordinates_ = subspace == LatticeSubspace::full ? n * n : n;
  double total = 1.0;
  for (int c = 0; c < coordinates_; ++c) total *= axis_points_;
  if (total > static_cast<double>(kMaxPoints)) {
    throw DomainError("MatrixLattice: " + format_double(total) + " points exceeds the limit of " +
                      std::to_string(kMaxPoints));
  }
  size_ = static_cast<std::size_t>(total);
}

std::vector<int> MatrixLattice::multi_index(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(coordinates_));
  for (int c = coordinates_ - 1; c >= 0; --c) {
    idx[static_cast<std::size_t>(c)] = static_cast<int>(flat % static_cast<std::size_t>(axis_points_));
    flat /= static_cast<std::size_t>(axis_points_);
  }
  return idx;
}

std::size_t MatrixLattice::flat_index(std::span<const int> multi) const {
  std::size_t flat = 0;
  for (int i : multi) flat = flat * static_cast<std::size_t>(axis_points_) + static_cast<std::size_t>(i);
  return flat;
}

Matrix MatrixLattice::matrix_at(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Matrix m(n_, n_);
  if (subspace_ == LatticeSubspace::full) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = coordinate_value(idx[static_cast<std::size_t>(i * n_ + j)]);
  } else {
    for (int i = 0; i < n_; ++i) m(i, i) = coordinate_value(idx[static_cast<std::size_t>(i)]);
  }
  return m;
}

// ---------------------------------------------------------------- directions

std::vector<RankOneDirection> rank_one_directions(const MatrixLattice& lattice, int extra_random,
                                                  std::uint64_t seed) {
  const int n = lattice.n();
  std::map<std::vector<int>, RankOneDirection> unique;

  auto canonical = [](Vector v) {
    for (int i = 0; i < v.dim(); ++i) {
      if (v[i] != 0.0) return v[i] < 0 ? (-1.0) * v : v;
    }
    return v;
  };
  auto add = [&](Vector a, Vector b) {
    if (a.norm_squared() == 0.0 || b.norm_squared() == 0.0) return;
    a = canonical(a);
    b = canonical(b);
    const Matrix ab = outer(a, b);
    std::vector<int> offsets;
    if (lattice.subspace() == LatticeSubspace::full) {
      for (double x : ab.entries()) offsets.push_back(static_cast<int>(std::lround(x)));
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && ab(i, j) != 0.0) return;  // leaves the diagonal subspace
      for (int i = 0; i < n; ++i) offsets.push_back(static_cast<int>(std::lround(ab(i, i))));
    }
    unique.emplace(offsets, RankOneDirection{a, b, offsets});
  };

  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int ia = 0; ia < total; ++ia) {
    for (int ib = 0; ib < total; ++ib) {
      Vector a(n), b(n);
      int ca = ia, cb = ib;
      for (int i = 0; i < n; ++i) {
        a[i] = ca % 3 - 1;
        b[i] = cb % 3 - 1;
        ca /= 3;
        cb /= 3;
      }
      add(a, b);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int k = 0; k < extra_random; ++k) {
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = entry(rng);
      b[i] = entry(rng);
    }
    add(a, b);
  }
  std::vector<RankOneDirection> out;
  out.reserve(unique.size());
  for (auto& [key, dir] : unique) out.push_back(std::move(dir));
  return out;
}

// ---------------------------------------------------------------- envelope

std::vector<double> lower_convex_envelope_1d(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, HUGE_VAL);
  std::vector<std::size_t> hull;
  hull.reserve(n);
  // Andrew's monotone chain on finite samples; positions are the indices.
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(values[k])) continue;
    while (hull.size() >= 2) {
      const std::size_t i = hull[hull.size() - 2];
      const std::size_t j = hull.back();
      const double cross = (static_cast<double>(j) - static_cast<double>(i)) * (values[k] - values[i]) -
                           (values[j] - values[i]) * (static_cast<double>(k) - static_cast<double>(i));
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  if (hull.empty()) return out;
  out[hull.front()] = values[hull.front()];
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t i = hull[h], j = hull[h + 1];
    const double span = static_cast<double>(j - i);
    for (std::size_t k = i; k <= j; ++k) {
      const double lam = static_cast<double>(k - i) / span;
      out[k] = (1.0 - lam) * values[i] + lam * values[j];
    }
    out[j] = values[j];
  }
  // The hull never lies above the data at its own nodes.
  for (std::size_t k = 0; k < n; ++k) out[k] = std::min(out[k], values[k]);
  return out;
}

namespace {

void apply_direction(const MatrixLattice& lattice, const RankOneDirection& dir, const std::vector<double>& cur,
                     std::vector<double>& next) {
  const int coords = lattice.coordinates();
  const int np = lattice.axis_points();
  std::vector<std::size_t> starts;
  for (std::size_t p = 0; p < lattice.size(); ++p) {
    const auto idx = lattice.multi_index(p);
    bool start = false;
    for (int c = 0; c < coords; ++c) {
      const int prev = idx[static_cast<std::size_t>(c)] - dir.offsets[static_cast<std::size_t>(c)];
      if (prev < 0 || prev >= np) {
        start = true;
        break;
      }
    }
    if (start) starts.push_back(p);
  }
  // Lines of one direction are disjoint, so they can be written concurrently.
  parallel_for(starts.size(), [&](std::size_t s) {
    auto idx = lattice.multi_index(starts[s]);
    std::vector<std::size_t> line;
    std::vector<double> vals;
    while (true) {
      const std::size_t flat = lattice.flat_index(idx);
      line.push_back(flat);
      vals.push_back(cur[flat]);
      bool inside = true;
      for (int c = 0; c < coords; ++c) {
        auto& x = idx[static_cast<std::size_t>(c)];
        x += dir.offsets[static_cast<std::size_t>(c)];
        if (x < 0 || x >= np) inside = false;
      }
      if (!inside) break;
    }
    if (line.size() < 3) return;
    const auto env = lower_convex_envelope_1d(vals);
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (env[k] < next[line[k]]) next[line[k]] = env[k];
    }
  });
}

std::vector<char> interior_mask(const MatrixLattice& lattice, const std::vector<RankOneDirection>& dirs) {
  std::vector<int> reach(static_cast<std::size_t>(lattice.coordinates()), 0);
  for (const auto& d : dirs)
    for (std::size_t c = 0; c < reach.size(); ++c) reach[c] = std::max(reach[c], std::abs(d.offsets[c]));
  std::vector<char> mask(lattice.size(), 1);
  for (std::size_t p = 0; p < lattice.size(); ++p) {
    const auto idx = lattice.multi_index(p);
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (idx[c] < reach[c] || idx[c] > lattice.axis_points() - 1 - reach[c]) {
        mask[p] = 0;
        break;
      }
    }
  }
  return mask;
}

}  // namespace

EnvelopeResult rank_one_convexify_values(std::vector<double> values, const MatrixLattice& lattice,
                                         const ConvexifySettings& settings) {
  if (values.size() != lattice.size()) throw DimensionError("rank_one_convexify: value count != lattice size");
  for (double v : values) {
    if (std::isnan(v) || v == -HUGE_VAL) throw DomainError("rank_one_convexify: values must be finite or +inf");
  }
  EnvelopeResult result{lattice, rank_one_directions(lattice, settings.extra_directions, settings.seed),
                        values, values, {}, 0, 0.0, false};
  result.interior = interior_mask(lattice, result.directions);

  std::vector<double>& cur = result.envelope;
  std::vector<double> next;
  for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
    next = cur;
    for (const auto& dir : result.directions) apply_direction(lattice, dir, cur, next);
    double dec = 0.0;
    for (std::size_t p = 0; p < cur.size(); ++p) {
      if (next[p] < cur[p]) dec = std::max(dec, std::isfinite(cur[p]) ? cur[p] - next[p] : HUGE_VAL);
    }
    cur.swap(next);
    result.sweeps = sweep + 1;
    result.last_decrement = dec;
    if (dec <= settings.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

EnvelopeResult rank_one_convexify(const StoredEnergy& f, const MatrixLattice& lattice,
                                  const ConvexifySettings& settings) {
  std::vector<double> values(lattice.size());
  parallel_for(values.size(), [&](std::size_t p) { values[p] = f(lattice.matrix_at(p)).to_double(); });
  return rank_one_convexify_values(std::move(values), lattice, settings);
}

double EnvelopeResult::max_interior_change() const {
  double m = 0.0;
  for (std::size_t p = 0; p < envelope.size(); ++p) {
    if (!interior[p] || !std::isfinite(original[p])) continue;
    m = std::max(m, std::abs(original[p] - envelope[p]));
  }
  return m;
}

std::size_t EnvelopeResult::interior_count() const {
  return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), 1));
}

void write_envelope_csv(std::ostream& os, const EnvelopeResult& result) {
  const auto& lat = result.lattice;
  for (int c = 0; c < lat.coordinates(); ++c) os << 'c' << c << ',';
  os << "f,envelope,interior\n";
  for (std::size_t p = 0; p < lat.size(); ++p) {
    const auto idx = lat.multi_index(p);
    for (int i : idx) os << format_double(lat.coordinate_value(i)) << ',';
    os << ExtendedReal(result.original[p]).to_string() << ',' << ExtendedReal(result.envelope[p]).to_string()
       << ',' << (result.interior[p] ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------- probes

PolyconvexityProbeReport strict_polyconvexity_probe(const StoredEnergy& f, int trials, std::uint64_t seed, int n) {
  if (n != 2 && n != 3) throw DimensionError("strict_polyconvexity_probe: n must be 2 or 3");
  PolyconvexityProbeReport report;
  report.trials = trials;
  report.worst_gap = -HUGE_VAL;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> size(0.1, 1.5);
  constexpr double tol = 1e-12;
  for (int t = 0; t < trials; ++t) {
    const Matrix a = random_matrix(n, n, rng, 2.0);
    Vector u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = gauss(rng);
      v[i] = gauss(rng);
    }
    Matrix b = outer(u, v);
    const double nb = frobenius(b);
    if (nb < 1e-12) continue;
    b *= size(rng) / nb;
    const Matrix lo = a - b, hi = a + b;

    double defect = max_abs_diff(0.5 * (lo + hi), a);
    defect = std::max(defect, max_abs_diff(0.5 * (cofactor(lo) + cofactor(hi)), cofactor(a)));
    defect = std::max(defect, std::abs(0.5 * (determinant(lo) + determinant(hi)) - determinant(a)));
    report.max_minor_defect = std::max(report.max_minor_defect, defect);

    const ExtendedReal f_lo = f(lo), f_hi = f(hi), f_mid = f(a);
    if (f_lo.is_infinite() || f_hi.is_infinite()) {
      ++report.skipped_infinite;
      continue;
    }
    const double mean = 0.5 * (f_lo.value() + f_hi.value());
    const double slack = tol * (1.0 + std::abs(mean));
    if (f_mid.is_infinite()) {
      ++report.convexity_violations;
      ++report.strictness_violations;
      report.worst_gap = HUGE_VAL;
      continue;
    }
    const double gap = f_mid.value() - mean;
    report.worst_gap = std::max(report.worst_gap, gap);
    if (gap > slack) ++report.convexity_violations;
    if (gap > -slack) ++report.strictness_violations;
  }
  report.passed = report.strictness_violations == 0;
  return report;
}

ExtendedReal jensen_gap(const StoredEnergy& f, const Matrix& a, std::span<const Atom> measure) {
  if (measure.empty()) throw DomainError("jensen_gap: empty measure");
  double total = 0.0;
  Matrix bary(a.rows(), a.cols());
  for (const auto& atom : measure) {
    if (!(atom.weight > 0.0)) throw DomainError("jensen_gap: weights must be positive");
    total += atom.weight;
    bary += atom.weight * atom.point;
  }
  if (std::abs(total - 1.0) > 1e-10) throw DomainError("jensen_gap: weights sum to " + format_double(total));
  if (max_abs_diff(bary, a) > 1e-10) throw DomainError("jensen_gap: barycenter does not match A");
  const ExtendedReal at_a = f(a);
  if (at_a.is_infinite()) throw DomainError("jensen_gap: f(A) is +inf");
  ExtendedReal integral(0.0);
  for (const auto& atom : measure) integral += atom.weight * f(atom.point);
  return integral - at_a;
}

std::vector<Atom> laminate(const Matrix& a, const Matrix& b, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("laminate: lambda must be in (0, 1)");
  return {{lambda, a + (1.0 - lambda) * b}, {1.0 - lambda, a - lambda * b}};
}

}  // namespace perilimit
