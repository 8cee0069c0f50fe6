#include "tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "perilimit/convexify.hpp"
#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"
#include "perilimit/nonlocal.hpp"
#include "perilimit/parallel.hpp"
#include "perilimit/pipeline.hpp"
#include "perilimit/quadrature.hpp"
#include "perilimit/recoverability.hpp"
#include "zoo.hpp"

#ifndef PERILIMIT_VERSION
#define PERILIMIT_VERSION "0.0.0"
#endif

namespace perilimit::cli {

namespace {

std::string matrix_text(const Matrix& a) {
  std::string s;
  for (double v : a.entries()) {
    if (!s.empty()) s += ' ';
    s += format_double(v);
  }
  return s;
}

Json matrix_json(const Matrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json extended_json(const ExtendedReal& x) {
  if (x.is_infinite()) return "inf";
  return x.value();
}

// NaN and infinities become strings so that the JSON stays valid.
Json real_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

std::string csv_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

int dim_of(const RunConfig& cfg) {
  const long long n = cfg.integer("run", "dim");
  if (n != 2 && n != 3) throw ConfigError("run.dim must be 2 or 3");
  return static_cast<int>(n);
}

std::uint64_t seed_of(const RunConfig& cfg) { return static_cast<std::uint64_t>(cfg.integer("run", "seed")); }

SphereQuadrature rule_for(const RunConfig& cfg, int n) {
  const long long order = cfg.integer("quadrature", "order");
  if (order == 0) return default_rule(n);
  try {
    return n == 2 ? build_circle_rule(static_cast<int>(order)) : build_sphere_rule(static_cast<int>(order));
  } catch (const perilimit::Error& e) {
    throw ConfigError(std::string("quadrature.order: ") + e.what());
  }
}

int positive(const RunConfig& cfg, const std::string& section, const std::string& key) {
  const long long v = cfg.integer(section, key);
  if (v < 1) throw ConfigError(section + "." + key + " must be >= 1");
  return static_cast<int>(v);
}

TaskOutcome verdict_outcome(bool passed) {
  TaskOutcome out;
  out.status = passed ? "pass" : "fail";
  out.exit_code = passed ? kExitPass : kExitFail;
  return out;
}

// ------------------------------------------------------------ quadrature-check

TaskOutcome quadrature_check(const RunConfig& cfg) {
  const double weight_tol = cfg.real("quadrature", "weight_tol");
  const double moment_tol = cfg.real("quadrature", "moment_tol");
  std::ostringstream csv;
  csv << "n,order,points,quantity,value,expected,error\n";
  Json per_dim = Json::object();
  bool passed = true;
  for (int n : {2, 3}) {
    const SphereQuadrature q = rule_for(cfg, n);
    const double sigma = q.measure();
    double weight_sum = 0.0;
    for (double w : q.weights()) weight_sum += w;
    const double weight_error = std::abs(weight_sum - sigma);
    auto row = [&](const std::string& what, double value, double expected) {
      csv << n << ',' << q.order() << ',' << q.size() << ',' << what << ',' << format_double(value) << ','
          << format_double(expected) << ',' << format_double(std::abs(value - expected)) << '\n';
      return std::abs(value - expected);
    };
    row("weights", weight_sum, sigma);
    double moment_error = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        const double m = integrate_over_sphere(q, [&](const Vector& z) { return z[j] * z[k]; });
        const double expected = j == k ? sigma / n : 0.0;
        moment_error = std::max(moment_error, row("z" + std::to_string(j) + "z" + std::to_string(k), m, expected));
      }
    }
    for (int j = 0; j < n; ++j) {
      const double m = integrate_over_sphere(q, [&](const Vector& z) { return std::pow(z[j], 4); });
      moment_error = std::max(moment_error, row("z" + std::to_string(j) + "^4", m, 3.0 * sigma / (n * (n + 2.0))));
    }
    const bool ok = weight_error <= weight_tol && moment_error <= moment_tol;
    passed = passed && ok;
    per_dim[std::to_string(n)] = Json{{"rule", q.description()},
                                      {"points", q.size()},
                                      {"weight_error", weight_error},
                                      {"max_moment_error", moment_error},
                                      {"passed", ok}};
  }
  TaskOutcome out = verdict_outcome(passed);
  out.result = Json{{"dimensions", per_dim}};
  out.csv = csv.str();
  return out;
}

// ------------------------------------------------------------ gamma-limit

TaskOutcome gamma_limit(const RunConfig& cfg) {
  const int n = dim_of(cfg);
  const PairwisePotential w = potential_from_config(cfg, n);
  const std::uint64_t seed = seed_of(cfg);
  const BlowupResult limit = cfg.is_auto("gamma", "beta")
                                 ? BlowupResult::estimated(w, positive(cfg, "gamma", "beta_samples"), seed, n)
                                 : BlowupResult::with_beta(w, cfg.real("gamma", "beta"), n);
  const SphereQuadrature q = rule_for(cfg, n);
  const int samples = positive(cfg, "gamma", "samples");
  const int trials = positive(cfg, "gamma", "trials");
  const bool compare = cfg.flag("gamma", "compare_density");
  const double compare_tol = cfg.real("gamma", "compare_tol");
  const std::optional<StoredEnergy> density =
      compare ? std::optional<StoredEnergy>(density_from_config(cfg)) : std::nullopt;

  std::mt19937_64 rng(seed + 1);
  std::ostringstream csv;
  csv << "index,matrix,wbar,density,error,invariance_deviation,invariance_tolerance\n";
  double max_error = 0.0, max_invariance_ratio = 0.0;
  bool invariance_ok = true;
  for (int s = 0; s < samples; ++s) {
    const Matrix a = random_matrix(n, n, rng, 1.0);
    const InvarianceReport inv = verify_limit_invariances(limit, a, trials, seed + 2 + static_cast<std::uint64_t>(s), q);
    invariance_ok = invariance_ok && inv.passed;
    max_invariance_ratio = std::max(max_invariance_ratio, inv.max_deviation / inv.tolerance);
    double reference = std::nan(""), error = std::nan("");
    if (density) {
      reference = (*density)(a).to_double();
      error = std::abs(inv.reference - reference);
      max_error = std::max(max_error, error);
    }
    csv << s << ',' << matrix_text(a) << ',' << csv_real(inv.reference) << ',' << csv_real(reference) << ','
        << csv_real(error) << ',' << csv_real(inv.max_deviation) << ',' << csv_real(inv.tolerance) << '\n';
  }
  const bool compare_ok = !compare || max_error <= compare_tol;
  TaskOutcome out = verdict_outcome(invariance_ok && compare_ok);
  out.result = Json{{"potential", w.describe()},
                    {"beta", limit.beta()},
                    {"beta_declared", limit.exact()},
                    {"quadrature", q.description()},
                    {"samples", samples},
                    {"trials", trials},
                    {"invariance_passed", invariance_ok},
                    {"max_invariance_deviation_over_tolerance", max_invariance_ratio}};
  if (density) {
    out.result["density"] = density->describe();
    out.result["max_density_error"] = max_error;
    out.result["density_match"] = compare_ok;
  }
  out.csv = csv.str();
  return out;
}

// ------------------------------------------------------------ recoverability

TaskOutcome recoverability(const RunConfig& cfg) {
  const int n = dim_of(cfg);
  const StoredEnergy w = density_from_config(cfg);
  const SphereQuadrature q = rule_for(cfg, n);
  const long long random = cfg.integer("recoverability", "random");
  if (random < 0) throw ConfigError("recoverability.random must be >= 0");
  const auto battery = default_test_battery(n, seed_of(cfg), static_cast<int>(random));
  const RecoverabilityReport rep = roundtrip_check(w, q, battery, cfg.real("recoverability", "tolerance"));

  std::ostringstream csv;
  csv << "index,matrix,lhs,rhs,status,residual,exceeds\n";
  Json worst = nullptr;
  double worst_abs = -1.0;
  for (std::size_t k = 0; k < rep.entries.size(); ++k) {
    const auto& e = rep.entries[k];
    csv << k << ',' << matrix_text(e.a) << ',' << e.lhs.to_string() << ',' << e.rhs.to_string() << ','
        << to_string(e.status) << ',' << csv_real(e.residual) << ',' << (rep.exceeds[k] ? 1 : 0) << '\n';
    const double mag = std::isnan(e.residual) ? -1.0 : std::abs(e.residual);
    if (mag > worst_abs) {
      worst_abs = mag;
      worst = Json{{"matrix", matrix_json(e.a)},
                   {"lhs", extended_json(e.lhs)},
                   {"rhs", extended_json(e.rhs)},
                   {"status", to_string(e.status)},
                   {"residual", real_json(e.residual)}};
    }
  }
  const CandidateProfile candidate = extract_candidate(w, n);
  Json cand = Json::object();
  for (double t : {0.5, 1.0, 2.0}) cand[format_double(t)] = extended_json(candidate(t));

  TaskOutcome out;
  out.status = to_string(rep.verdict);
  out.exit_code = rep.verdict == Verdict::consistent ? kExitPass : kExitFail;
  out.result = Json{{"verdict", out.status},
                    {"density", rep.density},
                    {"formula", rep.density_formula},
                    {"quadrature", rep.quadrature},
                    {"tolerance", rep.tolerance},
                    {"matrices", rep.entries.size()},
                    {"exceeding", std::count(rep.exceeds.begin(), rep.exceeds.end(), 1)},
                    {"indeterminate", rep.indeterminate},
                    {"max_abs_residual", rep.max_abs_residual},
                    {"worst", worst},
                    {"candidate_profile", cand}};
  out.csv = csv.str();
  return out;
}

// ------------------------------------------------------------ convexify

TaskOutcome convexify(const RunConfig& cfg) {
  const long long n = cfg.integer("convexify", "dim");
  if (n < 1 || n > 3) throw ConfigError("convexify.dim must be 1..3");
  const std::string& sub = cfg.text("convexify", "subspace");
  if (sub != "full" && sub != "diagonal") throw ConfigError("convexify.subspace must be full or diagonal");
  const std::string& expect = cfg.text("convexify", "expect");
  if (expect != "none" && expect != "fixed-point") throw ConfigError("convexify.expect must be none or fixed-point");
  const StoredEnergy w = density_from_config(cfg);

  std::optional<MatrixLattice> lattice;
  try {
    lattice.emplace(static_cast<int>(n), cfg.real("convexify", "bound"), cfg.real("convexify", "step"),
                    sub == "full" ? LatticeSubspace::full : LatticeSubspace::diagonal);
  } catch (const perilimit::Error& e) {
    throw ConfigError(std::string("convexify: ") + e.what());
  }
  ConvexifySettings settings;
  settings.extra_directions = static_cast<int>(cfg.integer("convexify", "extra_directions"));
  settings.tolerance = cfg.real("convexify", "tolerance");
  settings.max_sweeps = positive(cfg, "convexify", "max_sweeps");
  settings.seed = seed_of(cfg);
  const EnvelopeResult env = rank_one_convexify(w, *lattice, settings);

  const double change = env.max_interior_change();
  bool passed = env.converged;
  if (expect == "fixed-point") passed = passed && change <= cfg.real("convexify", "fixed_point_tol");
  TaskOutcome out = verdict_outcome(passed);
  out.result = Json{{"density", w.describe()},
                    {"lattice_points", lattice->size()},
                    {"directions", env.directions.size()},
                    {"sweeps", env.sweeps},
                    {"converged", env.converged},
                    {"last_decrement", env.last_decrement},
                    {"interior_points", env.interior_count()},
                    {"max_interior_change", change},
                    {"expect", expect}};
  std::ostringstream csv;
  write_envelope_csv(csv, env);
  out.csv = csv.str();
  return out;
}

// ------------------------------------------------------------ converge

TaskOutcome converge(const RunConfig& cfg) {
  const auto& sides = cfg.reals("converge", "sides");
  const int n = static_cast<int>(sides.size());
  if (n != 2 && n != 3) throw ConfigError("converge.sides must have 2 or 3 entries");
  const auto& entries = cfg.reals("converge", "matrix");
  if (entries.size() != static_cast<std::size_t>(n * n)) {
    throw ConfigError("converge.matrix must have " + std::to_string(n * n) + " entries");
  }
  const Matrix a(n, n, entries);
  const std::string& kind = cfg.text("converge", "deformation");
  if (kind != "affine" && kind != "quadratic") throw ConfigError("converge.deformation must be affine or quadratic");
  const DeformationField u =
      kind == "affine" ? DeformationField::affine(a) : DeformationField::quadratic(a, cfg.real("converge", "kappa"));
  const PairwisePotential w = potential_from_config(cfg, n);
  const double beta = cfg.is_auto("gamma", "beta")
                          ? (w.homogeneity() ? *w.homogeneity()
                                             : estimate_beta(w, positive(cfg, "gamma", "beta_samples"), seed_of(cfg),
                                                             n, n))
                          : cfg.real("gamma", "beta");
  NonlocalSettings settings;
  settings.radial_points = positive(cfg, "converge", "radial_points");
  settings.interior_only = cfg.flag("converge", "interior_only");
  const int cells = positive(cfg, "converge", "cells_per_delta");
  ConvergenceStudy study;
  try {
    study = convergence_study(w, beta, u, sides, cfg.reals("converge", "deltas"), cells, settings);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("converge: ") + e.what());
  }

  bool all_zero = true, monotone = true;
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const auto& r = study.rows[i];
    all_zero = all_zero && r.gap <= 1e-10 * (1.0 + std::abs(r.reference));
    if (i > 0) monotone = monotone && r.gap < study.rows[i - 1].gap;
  }
  const double min_slope = cfg.real("converge", "min_slope");
  std::string criterion;
  bool passed = false;
  if (all_zero) {
    criterion = "all gaps vanish";
    passed = true;
  } else if (kind == "affine" && !settings.interior_only) {
    criterion = "slope >= " + format_double(min_slope);
    passed = study.slope >= min_slope;
  } else {
    criterion = "gaps decrease monotonically";
    passed = monotone;
  }
  TaskOutcome out = verdict_outcome(passed);
  out.result = Json{{"potential", w.describe()},
                    {"beta", beta},
                    {"deformation", u.describe()},
                    {"cells_per_delta", cells},
                    {"slope", real_json(study.slope)},
                    {"monotone", monotone},
                    {"criterion", criterion}};
  std::ostringstream csv;
  write_convergence_csv(csv, study);
  out.csv = csv.str();
  return out;
}

// ------------------------------------------------------------ counterexamples

TaskOutcome counterexamples(const RunConfig& cfg) {
  const SphereQuadrature q2 = rule_for(cfg, 2);
  const SphereQuadrature q3 = rule_for(cfg, 3);
  const std::uint64_t seed = seed_of(cfg);
  std::ostringstream csv;
  csv << "check,expected,observed,matches\n";
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, const std::string& expected, const std::string& observed, bool ok) {
    csv << name << ',' << expected << ',' << observed << ',' << (ok ? 1 : 0) << '\n';
    checks.push_back(Json{{"check", name}, {"expected", expected}, {"observed", observed}, {"matches", ok}});
    all = all && ok;
  };

  {
    const auto e = recoverability_residual(make_frobenius_profile(ScalarProfile::power(1.0, 2.0)),
                                           Matrix::diagonal({1.0, 2.0}), q2);
    record("residual |A|^4 n=2 diag(1 2)", "-4.5", csv_real(e.residual), std::abs(e.residual + 4.5) <= 1e-6);
  }
  {
    const auto rep = roundtrip_check(make_frobenius_squared(), q3, default_test_battery(3, seed));
    record("recoverability |A|^2", "consistent", to_string(rep.verdict), rep.verdict == Verdict::consistent);
  }
  {
    const StoredEnergy mr = make_mooney_rivlin(1.0, 1.0, ScalarProfile::well());
    const auto e = recoverability_residual(mr, Matrix::diagonal({2.0, 0.5, 1.0}), q3);
    record("residual mooney-rivlin diag(2 0.5 1)", "|r| > 0.1", csv_real(e.residual),
           e.status == ResidualStatus::finite && std::abs(e.residual) > 0.1);
    const auto rep = roundtrip_check(mr, q3, default_test_battery(3, seed));
    record("recoverability mooney-rivlin", "violated", to_string(rep.verdict), rep.verdict == Verdict::violated);
  }
  {
    const auto e = recoverability_residual(make_incompressible_mr(1.0, 1.0), Matrix::diagonal({2.0, 0.5, 1.0}), q3);
    record("residual incompressible-mr diag(2 0.5 1)", "infinite-violation", to_string(e.status),
           e.status == ResidualStatus::infinite_violation && e.lhs.is_finite() && e.rhs.is_infinite());
  }
  {
    const auto suite = jensen_counterexample_suite(3, q3, cfg.reals("counterexamples", "jensen_stretches"));
    for (const auto& e : suite.entries) {
      record(e.family + " " + e.statement + " g=" + e.profile + " A=" + matrix_text(e.a), "margin " + e.expectation,
             format_double(e.margin), e.matches);
    }
  }
  const auto& stretches = cfg.reals("counterexamples", "stretches");
  Json scans = Json::array();
  for (const auto& [beta, g] : {std::pair{1.0, ScalarProfile::zero()}, std::pair{0.0, ScalarProfile::well()}}) {
    const auto scan = mooney_rivlin_inequality_check(1.0, beta, g, stretches, q3);
    const std::string name = "mooney-rivlin inequality beta=" + format_double(beta) + " g=" + g.describe();
    record(name, "violated for some lambda",
           scan.lambda_star ? "lambda*=" + format_double(*scan.lambda_star) : "inconclusive",
           scan.lambda_star.has_value());
    scans.push_back(Json{{"beta", beta},
                         {"profile", scan.profile},
                         {"branch", scan.branch},
                         {"threshold_a", scan.threshold_a},
                         {"c", scan.c},
                         {"lambda_star", scan.lambda_star ? Json(*scan.lambda_star) : Json(nullptr)}});
  }
  TaskOutcome out = verdict_outcome(all);
  out.result = Json{{"all_reproduced", all}, {"checks", checks}, {"mooney_rivlin_scans", scans}};
  out.csv = csv.str();
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

TaskOutcome run_task(const RunConfig& cfg) {
  const long long threads = cfg.integer("run", "threads");
  if (threads < 1) throw ConfigError("run.threads must be >= 1");
  set_thread_limit(static_cast<int>(threads));
  const std::string& task = cfg.text("run", "task");
  if (task == "quadrature-check") return quadrature_check(cfg);
  if (task == "gamma-limit") return gamma_limit(cfg);
  if (task == "recoverability") return recoverability(cfg);
  if (task == "convexify") return convexify(cfg);
  if (task == "converge") return converge(cfg);
  if (task == "counterexamples") return counterexamples(cfg);
  throw ConfigError("run.task: unknown task '" + task + "'");
}

Json make_summary(const RunConfig& cfg, const TaskOutcome& outcome, bool with_timestamp) {
  Json j = Json::object();
  j["tool"] = "perilimit";
  j["version"] = PERILIMIT_VERSION;
  j["task"] = cfg.text("run", "task");
  j["status"] = outcome.status;
  j["exit_code"] = outcome.exit_code;
  j["config"] = cfg.to_json();
  j["result"] = outcome.result;
  if (with_timestamp) j["timestamp"] = utc_timestamp();
  return j;
}

int run_and_report(const RunConfig& cfg, const std::string& out_dir, bool with_timestamp, std::ostream& err) {
  TaskOutcome outcome;
  try {
    outcome = run_task(cfg);
  } catch (const ConfigError& e) {
    err << "perilimit: invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const perilimit::Error& e) {
    err << "perilimit: " << e.what() << '\n';
    return kExitError;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "perilimit: cannot create " << out_dir << ": " << ec.message() << '\n';
    return kExitError;
  }
  const std::filesystem::path dir(out_dir);
  std::ofstream summary(dir / "summary.json", std::ios::binary);
  std::ofstream detail(dir / "detail.csv", std::ios::binary);
  if (!summary || !detail) {
    err << "perilimit: cannot write reports in " << out_dir << '\n';
    return kExitError;
  }
  summary << make_summary(cfg, outcome, with_timestamp).dump(2) << '\n';
  detail << outcome.csv;
  if (!summary.flush() || !detail.flush()) {
    err << "perilimit: write failed in " << out_dir << '\n';
    return kExitError;
  }
  err << "perilimit: " << cfg.text("run", "task") << ": " << outcome.status << '\n';
  return outcome.exit_code;
}

}  // namespace perilimit::cli
