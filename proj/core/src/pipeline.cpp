#include "perilimit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"
#include "perilimit/parallel.hpp"

namespace perilimit {

namespace {

Vector random_vector(int dim, std::mt19937_64& rng, double min_norm, double max_norm) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(min_norm, max_norm);
  Vector v(dim);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    n2 = v.norm_squared();
  } while (n2 < 1e-12);
  return (radius(rng) / std::sqrt(n2)) * v;
}

}  // namespace

BlowupTrace blowup_trace(const PairwisePotential& w, double beta, const Vector& ref_bond,
                         const Vector& def_bond, const BlowupSettings& settings) {
  if (ref_bond.norm() == 0.0) throw DomainError("blowup: reference bond must be nonzero");
  if (settings.last_level - settings.first_level < settings.richardson_passes + 1) {
    throw DomainError("blowup: t-grid too short for the requested Richardson passes");
  }
  BlowupTrace trace;
  std::vector<double> level;
  for (int k = settings.first_level; k <= settings.last_level; ++k) {
    const double t = std::ldexp(1.0, -k);
    const double s = w(t * ref_bond, t * def_bond) / std::pow(t, beta);
    trace.samples.push_back({t, s});
    level.push_back(s);
  }
  // t_{k+1} = t_k / 2, so pass j eliminates a t^j term with factor 2^j.
  for (int j = 1; j <= settings.richardson_passes; ++j) {
    const double f = std::ldexp(1.0, j);
    std::vector<double> next(level.size() - 1);
    for (std::size_t k = 0; k + 1 < level.size(); ++k) {
      next[k] = (f * level[k + 1] - level[k]) / (f - 1.0);
    }
    level = std::move(next);
  }
  trace.limit = level.back();
  trace.cauchy_residual = std::abs(level.back() - level[level.size() - 2]);
  double scale = 0.0;
  for (const auto& s : trace.samples) scale = std::max(scale, std::abs(s.scaled_value));
  trace.converged = std::isfinite(trace.limit) &&
                    (trace.cauchy_residual <= settings.relative_tolerance * std::abs(trace.limit) ||
                     trace.cauchy_residual <= 1e-14 * scale);
  return trace;
}

double blowup(const PairwisePotential& w, double beta, const Vector& ref_bond, const Vector& def_bond,
              const BlowupSettings& settings) {
  const BlowupTrace trace = blowup_trace(w, beta, ref_bond, def_bond, settings);
  if (!trace.converged) {
    throw DivergenceError("no finite blow-up at beta = " + format_double(beta) + " (Cauchy residual " +
                          format_double(trace.cauchy_residual) + ", limit estimate " +
                          format_double(trace.limit) + ")");
  }
  return trace.limit;
}

BetaEstimate estimate_beta_detailed(const PairwisePotential& w, int samples, std::uint64_t seed, int ref_dim,
                                    int def_dim, double tolerance) {
  if (samples < 1) throw DomainError("estimate_beta: samples must be >= 1");
  const BlowupSettings grid;
  std::vector<double> log_t;
  for (int k = grid.first_level; k <= grid.last_level; ++k) log_t.push_back(-k * std::log(2.0));
  const double n = static_cast<double>(log_t.size());
  double mean_x = 0.0;
  for (double x : log_t) mean_x += x;
  mean_x /= n;
  double sxx = 0.0;
  for (double x : log_t) sxx += (x - mean_x) * (x - mean_x);

  std::mt19937_64 rng(seed);
  BetaEstimate est;
  double slope_min = HUGE_VAL, slope_max = -HUGE_VAL, slope_sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = random_vector(ref_dim, rng, 0.5, 2.0);
    const Vector y = random_vector(def_dim, rng, 0.5, 2.0);
    std::vector<double> log_v;
    bool usable = true;
    for (int k = grid.first_level; k <= grid.last_level; ++k) {
      const double t = std::ldexp(1.0, -k);
      const double v = std::abs(w(t * x, t * y));
      if (!(v > 0.0) || !std::isfinite(v)) {
        usable = false;
        break;
      }
      log_v.push_back(std::log(v));
    }
    if (!usable) continue;
    double mean_y = 0.0;
    for (double v : log_v) mean_y += v;
    mean_y /= n;
    double sxy = 0.0;
    for (std::size_t i = 0; i < log_t.size(); ++i) sxy += (log_t[i] - mean_x) * (log_v[i] - mean_y);
    const double slope = sxy / sxx;
    for (std::size_t i = 0; i < log_t.size(); ++i) {
      const double fit = mean_y + slope * (log_t[i] - mean_x);
      est.max_fit_residual = std::max(est.max_fit_residual, std::abs(log_v[i] - fit));
    }
    slope_min = std::min(slope_min, slope);
    slope_max = std::max(slope_max, slope);
    slope_sum += slope;
    ++est.samples_used;
  }
  if (est.samples_used == 0) throw DomainError("estimate_beta: potential vanishes on every sample");
  est.beta = slope_sum / est.samples_used;
  est.slope_spread = slope_max - slope_min;
  if (est.slope_spread > tolerance || est.max_fit_residual > tolerance) {
    throw DomainError("estimate_beta: not asymptotically homogeneous (slope spread " +
                      format_double(est.slope_spread) + ", log-log fit residual " +
                      format_double(est.max_fit_residual) + ")");
  }
  return est;
}

double estimate_beta(const PairwisePotential& w, int samples, std::uint64_t seed, int ref_dim, int def_dim) {
  return estimate_beta_detailed(w, samples, seed, ref_dim, def_dim).beta;
}

BlowupResult BlowupResult::from_declared(const PairwisePotential& w, int dim) {
  if (!w.homogeneity()) throw DomainError("blow-up: potential declares no homogeneity degree");
  return with_beta(w, *w.homogeneity(), dim);
}

BlowupResult BlowupResult::with_beta(const PairwisePotential& w, double beta, int dim,
                                     const BlowupSettings& settings) {
  const auto declared = w.homogeneity();
  if (declared && std::abs(*declared - beta) > 1e-12) {
    throw DomainError("blow-up: beta = " + format_double(beta) + " conflicts with declared degree " +
                      format_double(*declared));
  }
  const Vector probe = Vector::unit(dim, 0);
  BlowupTrace trace = blowup_trace(w, beta, probe, probe, settings);
  if (!trace.converged) {
    throw DivergenceError("blow-up: no finite limit at beta = " + format_double(beta));
  }
  return BlowupResult(w, beta, declared.has_value(), settings, std::move(trace));
}

BlowupResult BlowupResult::estimated(const PairwisePotential& w, int samples, std::uint64_t seed, int dim,
                                     const BlowupSettings& settings) {
  double beta = estimate_beta(w, samples, seed, dim, dim);
  // Snap to the declared degree when the estimate confirms it.
  if (w.homogeneity() && std::abs(*w.homogeneity() - beta) <= 1e-6) beta = *w.homogeneity();
  return with_beta(w, beta, dim, settings);
}

double BlowupResult::operator()(const Vector& ref_bond, const Vector& def_bond) const {
  if (exact_) return w_(ref_bond, def_bond);
  return blowup(w_, beta_, ref_bond, def_bond, settings_);
}

double local_density(const BlowupResult& blowup, const Matrix& a, const SphereQuadrature& q) {
  if (a.cols() != q.dim()) {
    throw DimensionError("local_density: matrix has " + std::to_string(a.cols()) +
                         " columns but the sphere rule is for n = " + std::to_string(q.dim()));
  }
  return integrate_over_sphere(q, [&](const Vector& z) { return blowup(z, a * z); });
}

double invariance_deviation(const BlowupResult& blowup, const Matrix& a, const Rotation& post,
                            const Rotation& pre, const SphereQuadrature& q) {
  const double base = local_density(blowup, a, q);
  const double rotated = local_density(blowup, post * a * pre, q);
  return std::abs(rotated - base);
}

InvarianceReport verify_limit_invariances(const BlowupResult& blowup, const Matrix& a, int trials,
                                          std::uint64_t seed, const SphereQuadrature& q) {
  InvarianceReport report;
  report.trials = trials;
  report.reference = local_density(blowup, a, q);
  report.tolerance = 1e-7 * (1.0 + std::abs(report.reference));

  std::mt19937_64 rng(seed);
  std::vector<Rotation> post, pre;
  for (int t = 0; t < trials; ++t) {
    post.push_back(a.rows() == 1 ? Rotation::identity(1) : random_rotation(a.rows(), rng));
    pre.push_back(random_rotation(a.cols(), rng));
  }
  std::vector<double> deviation(static_cast<std::size_t>(trials), 0.0);
  parallel_for(deviation.size(), [&](std::size_t t) {
    const double v = local_density(blowup, post[t] * a * pre[t], q);
    deviation[t] = std::abs(v - report.reference);
  });
  for (double d : deviation) report.max_deviation = std::max(report.max_deviation, d);
  report.passed = report.max_deviation <= report.tolerance;
  return report;
}

}  // namespace perilimit
