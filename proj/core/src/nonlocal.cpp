#include "perilimit/nonlocal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"
#include "perilimit/parallel.hpp"

namespace perilimit {

// ---------------------------------------------------------------- BoxDomain

BoxDomain::BoxDomain(std::vector<double> sides, std::vector<int> resolution)
    : sides_(std::move(sides)), res_(std::move(resolution)), cell_volume_(1.0) {
  if (sides_.empty() || sides_.size() > static_cast<std::size_t>(kMaxDim)) {
    throw DimensionError("BoxDomain: dimension must be 1..3");
  }
  if (res_.size() != sides_.size()) throw DimensionError("BoxDomain: one resolution per side");
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    if (!(sides_[i] > 0.0) || !std::isfinite(sides_[i])) throw DomainError("BoxDomain: sides must be positive");
    if (res_[i] < 1) throw DomainError("BoxDomain: resolution must be positive");
    cell_volume_ *= sides_[i] / res_[i];
  }
}

BoxDomain BoxDomain::unit(int n, int res) {
  return BoxDomain(std::vector<double>(static_cast<std::size_t>(n), 1.0), std::vector<int>(static_cast<std::size_t>(n), res));
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (double s : sides_) v *= s;
  return v;
}

double BoxDomain::shortest_side() const { return *std::min_element(sides_.begin(), sides_.end()); }

double BoxDomain::widest_cell() const {
  double h = 0.0;
  for (int i = 0; i < dim(); ++i) h = std::max(h, cell_width(i));
  return h;
}

std::size_t BoxDomain::cell_count() const {
  std::size_t c = 1;
  for (int r : res_) c *= static_cast<std::size_t>(r);
  return c;
}

Vector BoxDomain::cell_center(std::size_t flat) const {
  Vector x(dim());
  for (int i = dim() - 1; i >= 0; --i) {
    const auto r = static_cast<std::size_t>(resolution(i));
    x[i] = (static_cast<double>(flat % r) + 0.5) * cell_width(i);
    flat /= r;
  }
  return x;
}

BoxDomain BoxDomain::rescaled(int num, int den) const {
  std::vector<int> res;
  for (int r : res_) {
    if ((r * num) % den != 0) throw DomainError("BoxDomain: resolution not divisible for rescaling");
    res.push_back(r * num / den);
  }
  return BoxDomain(sides_, std::move(res));
}

// ---------------------------------------------------------------- DeformationField

DeformationField DeformationField::affine(Matrix a, Vector offset) {
  const int m = a.rows();
  if (offset.dim() == 0) offset = Vector(m);
  if (offset.dim() != m) throw DimensionError("affine deformation: offset length differs from A rows");
  auto eval = [a, offset](const Vector& x) { return a * x + offset; };
  auto grad = [a](const Vector&) { return a; };
  return DeformationField(Kind::affine, "affine A=" + a.to_string(), m, eval, grad);
}

DeformationField DeformationField::quadratic(Matrix a, double kappa) {
  const int m = a.rows();
  const int k = std::min(a.rows(), a.cols());
  auto eval = [a, kappa, k](const Vector& x) {
    Vector y = a * x;
    for (int i = 0; i < k; ++i) y[i] += 0.5 * kappa * x[i] * x[i];
    return y;
  };
  auto grad = [a, kappa, k](const Vector& x) {
    Matrix g = a;
    for (int i = 0; i < k; ++i) g(i, i) += kappa * x[i];
    return g;
  };
  return DeformationField(Kind::quadratic, "quadratic A=" + a.to_string() + " kappa=" + format_double(kappa), m,
                          eval, grad);
}

DeformationField DeformationField::sampled(const BoxDomain& dom, int m, std::vector<Vector> node_values) {
  const int n = dom.dim();
  std::size_t expected = 1;
  for (int i = 0; i < n; ++i) expected *= static_cast<std::size_t>(dom.resolution(i) + 1);
  if (node_values.size() != expected) throw DimensionError("sampled deformation: wrong number of node values");
  for (const auto& v : node_values) {
    if (v.dim() != m) throw DimensionError("sampled deformation: node value has wrong length");
  }
  auto nodes = std::make_shared<const std::vector<Vector>>(std::move(node_values));

  // Locates x: lower node index and local coordinate in [0, 1] per axis.
  auto locate = [dom](const Vector& x, std::array<int, kMaxDim>& idx, std::array<double, kMaxDim>& s) {
    for (int i = 0; i < dom.dim(); ++i) {
      const double h = dom.cell_width(i);
      const double c = std::clamp(x[i] / h, 0.0, static_cast<double>(dom.resolution(i)));
      int k = std::min(static_cast<int>(c), dom.resolution(i) - 1);
      idx[static_cast<std::size_t>(i)] = k;
      s[static_cast<std::size_t>(i)] = c - k;
    }
  };
  auto node_at = [dom, nodes](const std::array<int, kMaxDim>& idx, int corner) -> const Vector& {
    std::size_t flat = 0;
    for (int i = 0; i < dom.dim(); ++i) {
      const int bit = (corner >> (dom.dim() - 1 - i)) & 1;
      flat = flat * static_cast<std::size_t>(dom.resolution(i) + 1) +
             static_cast<std::size_t>(idx[static_cast<std::size_t>(i)] + bit);
    }
    return (*nodes)[flat];
  };
  // Multilinear weight of `corner`; with `diff` >= 0 the derivative in that axis.
  auto weight = [n](const std::array<double, kMaxDim>& s, int corner, int diff, const BoxDomain& d) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const int bit = (corner >> (n - 1 - i)) & 1;
      const double si = s[static_cast<std::size_t>(i)];
      if (i == diff) {
        w *= (bit ? 1.0 : -1.0) / d.cell_width(i);
      } else {
        w *= bit ? si : 1.0 - si;
      }
    }
    return w;
  };

  auto eval = [dom, m, n, locate, node_at, weight](const Vector& x) {
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> s{};
    locate(x, idx, s);
    Vector y(m);
    for (int corner = 0; corner < (1 << n); ++corner) y = y + weight(s, corner, -1, dom) * node_at(idx, corner);
    return y;
  };
  auto grad = [dom, m, n, locate, node_at, weight](const Vector& x) {
    std::array<int, kMaxDim> idx{};
    std::array<double, kMaxDim> s{};
    locate(x, idx, s);
    Matrix g(m, n);
    for (int j = 0; j < n; ++j) {
      for (int corner = 0; corner < (1 << n); ++corner) {
        const double w = weight(s, corner, j, dom);
        const Vector& v = node_at(idx, corner);
        for (int i = 0; i < m; ++i) g(i, j) += w * v[i];
      }
    }
    return g;
  };
  return DeformationField(Kind::sampled, "sampled", m, eval, grad);
}

DeformationField DeformationField::analytic(std::string name, int m, std::function<Vector(const Vector&)> eval,
                                            std::function<Matrix(const Vector&)> gradient) {
  if (m < 1 || m > kMaxDim) throw DimensionError("analytic deformation: target dimension must be 1..3");
  if (!eval || !gradient) throw DomainError("analytic deformation: empty callable");
  return DeformationField(Kind::analytic, std::move(name), m, std::move(eval), std::move(gradient));
}

DeformationField DeformationField::rotated(const Matrix& r) const {
  if (r.cols() != m_) throw DimensionError("rotated deformation: rotation size differs from target dimension");
  auto eval = [r, f = eval_](const Vector& x) { return r * f(x); };
  auto grad = [r, g = grad_](const Vector& x) { return r * g(x); };
  return DeformationField(kind_, name_ + " rotated", r.rows(), eval, grad);
}

DeformationField DeformationField::translated(const Vector& c) const {
  if (c.dim() != m_) throw DimensionError("translated deformation: offset length differs from target dimension");
  auto eval = [c, f = eval_](const Vector& x) { return f(x) + c; };
  return DeformationField(kind_, name_ + " translated", m_, eval, grad_);
}

// ---------------------------------------------------------------- energy

SphereQuadrature angular_rule(int n, const NonlocalSettings& settings) {
  if (n == 2) return build_circle_rule(settings.circle_points);
  if (n == 3) return build_sphere_rule(settings.sphere_order);
  throw DimensionError("nonlocal_energy: n must be 2 or 3");
}

namespace {

bool is_interior(const BoxDomain& dom, const Vector& x, double delta) {
  for (int i = 0; i < dom.dim(); ++i) {
    if (x[i] < delta || dom.side(i) - x[i] < delta) return false;
  }
  return true;
}

void check_horizon(const BoxDomain& dom, double delta) {
  if (dom.dim() != 2 && dom.dim() != 3) throw DimensionError("nonlocal_energy: n must be 2 or 3");
  if (!(delta > 0.0)) throw DomainError("nonlocal_energy: delta must be positive");
  if (!(delta < 0.5 * dom.shortest_side())) {
    throw DomainError("nonlocal_energy: delta must be smaller than half the shortest side");
  }
  if (delta < 3.0 * dom.widest_cell() * (1.0 - 1e-12)) {
    throw DomainError("nonlocal_energy: delta spans fewer than 3 cells (resolution too coarse)");
  }
}

// Distance from x along unit z to the box boundary.
double ray_length(const BoxDomain& dom, const Vector& x, const Vector& z) {
  double r = HUGE_VAL;
  for (int i = 0; i < dom.dim(); ++i) {
    if (z[i] > 0.0) r = std::min(r, (dom.side(i) - x[i]) / z[i]);
    if (z[i] < 0.0) r = std::min(r, -x[i] / z[i]);
  }
  return r;
}

// Pairwise summation keeps the result independent of how cells are split
// across threads and limits rounding growth.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

double interior_volume(const BoxDomain& dom, double delta) {
  std::size_t count = 0;
  for (std::size_t c = 0; c < dom.cell_count(); ++c) count += is_interior(dom, dom.cell_center(c), delta) ? 1 : 0;
  return static_cast<double>(count) * dom.cell_volume();
}

double nonlocal_energy(const PairwisePotential& w, double beta, double delta, const DeformationField& u,
                       const BoxDomain& dom, const NonlocalSettings& settings) {
  check_horizon(dom, delta);
  if (settings.radial_points < 1) throw DomainError("nonlocal_energy: radial_points must be >= 1");
  const int n = dom.dim();
  const SphereQuadrature q = angular_rule(n, settings);
  const GaussLegendre gl = gauss_legendre(settings.radial_points);
  const std::optional<Matrix> affine =
      u.kind() == DeformationField::Kind::affine ? std::optional<Matrix>(u.gradient(Vector(n))) : std::nullopt;

  std::vector<double> cell(dom.cell_count(), 0.0);
  parallel_for(cell.size(), [&](std::size_t c) {
    const Vector x = dom.cell_center(c);
    if (settings.interior_only && !is_interior(dom, x, delta)) return;
    const Vector ux = affine ? Vector() : u(x);
    double inner = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const Vector& z = q.nodes()[k];
      const double len = std::min(delta, ray_length(dom, x, z));
      if (len <= 0.0) continue;
      double ray = 0.0;
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double r = 0.5 * len * (gl.nodes[j] + 1.0);
        const Vector bond = r * z;
        const Vector def = affine ? (*affine) * bond : u(x + bond) - ux;
        ray += gl.weights[j] * w(bond, def) * std::pow(r, n - 1);
      }
      inner += q.weights()[k] * 0.5 * len * ray;
    }
    cell[c] = inner;
  });
  const double total = pairwise_sum(cell.data(), cell.size()) * dom.cell_volume();
  return (n + beta) / std::pow(delta, n + beta) * total;
}

NonlocalEstimate nonlocal_energy_with_estimate(const PairwisePotential& w, double beta, double delta,
                                               const DeformationField& u, const BoxDomain& dom,
                                               const NonlocalSettings& settings) {
  NonlocalEstimate e;
  e.value = nonlocal_energy(w, beta, delta, u, dom, settings);
  e.coarse = nonlocal_energy(w, beta, delta, u, dom.rescaled(1, 2), settings);
  e.estimate = std::abs(e.value - e.coarse);
  return e;
}

double local_reference(const BlowupResult& blowup, const DeformationField& u, const BoxDomain& dom,
                       const SphereQuadrature& q, bool interior_only, double delta) {
  if (q.dim() != dom.dim()) throw DimensionError("local_reference: sphere rule and domain differ in dimension");
  std::vector<double> cell(dom.cell_count(), 0.0);
  const bool affine = u.kind() == DeformationField::Kind::affine;
  const double affine_value = affine ? local_density(blowup, u.gradient(Vector(dom.dim())), q) : 0.0;
  parallel_for(cell.size(), [&](std::size_t c) {
    const Vector x = dom.cell_center(c);
    if (interior_only && !is_interior(dom, x, delta)) return;
    cell[c] = affine ? affine_value : local_density(blowup, u.gradient(x), q);
  });
  return pairwise_sum(cell.data(), cell.size()) * dom.cell_volume();
}

// ---------------------------------------------------------------- convergence

namespace {

double loglog_slope(const std::vector<ConvergenceRow>& rows, std::size_t count) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < count; ++i) {
    if (rows[i].gap > 0.0) {
      xs.push_back(std::log(rows[i].delta));
      ys.push_back(std::log(rows[i].gap));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

ConvergenceStudy convergence_study(const PairwisePotential& w, double beta, const DeformationField& u,
                                   const std::vector<double>& sides, const std::vector<double>& deltas,
                                   int cells_per_delta, const NonlocalSettings& settings) {
  if (deltas.empty()) throw DomainError("convergence_study: empty delta list");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) throw DomainError("convergence_study: delta list must be strictly decreasing");
  }
  if (cells_per_delta < 3) throw DomainError("convergence_study: cells_per_delta must be >= 3");
  const int n = static_cast<int>(sides.size());
  const SphereQuadrature q = angular_rule(n, settings);
  const BlowupResult limit = BlowupResult::with_beta(w, beta, n);

  ConvergenceStudy study;
  study.cells_per_delta = cells_per_delta;
  for (double delta : deltas) {
    const double h = delta / cells_per_delta;
    std::vector<int> res;
    for (double s : sides) res.push_back(std::max(1, static_cast<int>(std::lround(s / h))));
    const BoxDomain dom(sides, res);
    ConvergenceRow row;
    row.delta = delta;
    row.energy = nonlocal_energy(w, beta, delta, u, dom, settings);
    row.reference = local_reference(limit, u, dom, q, settings.interior_only, delta);
    row.gap = std::abs(row.energy - row.reference);
    study.rows.push_back(row);
    study.rows.back().slope_running = loglog_slope(study.rows, study.rows.size());
  }
  study.slope = loglog_slope(study.rows, study.rows.size());
  return study;
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study) {
  os << "delta,I_delta,I_local,gap,slope_running\n";
  for (const auto& r : study.rows) {
    os << format_double(r.delta) << ',' << format_double(r.energy) << ',' << format_double(r.reference) << ','
       << format_double(r.gap) << ',' << format_double(r.slope_running) << '\n';
  }
}

}  // namespace perilimit
