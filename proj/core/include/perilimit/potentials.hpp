#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perilimit/extended_real.hpp"
#include "perilimit/linalg.hpp"
#include "perilimit/profile.hpp"

namespace perilimit {

/// Bond density w(x~, y~) of a homogeneous, isotropic, frame-indifferent
/// material: w depends only on |x~| (reference bond) and |y~| (deformed bond).
///
/// Built-in kinds:
///   power-sum      sum_k c_k |y~|^p_k / |x~|^q_k  (power-bond is one term)
///   ratio-profile  g(|y~| / |x~|), homogeneous of degree 0
/// A custom evaluator may break the symmetries; it exists so tests can build
/// control densities.
class PairwisePotential {
 public:
  enum class Kind { power_sum, ratio_profile, custom };

  struct PowerTerm {
    double coef;
    double p;  // exponent of |y~|
    double q;  // exponent of |x~| in the denominator
  };

  static PairwisePotential power_sum(std::vector<PowerTerm> terms);
  static PairwisePotential ratio_profile(ScalarProfile g);
  /// `homogeneity` is the declared degree beta, if known.
  static PairwisePotential custom(std::string name,
                                  std::function<double(const Vector&, const Vector&)> eval,
                                  std::optional<double> homogeneity = std::nullopt);

  /// Evaluates w. Built-in kinds throw DomainError at x~ = 0, where bond
  /// densities blow up. Beyond the horizon (if set) the value is 0.
  double operator()(const Vector& ref_bond, const Vector& def_bond) const;

  /// Radial form w~(r, s) = w(r e_1, s e_1); meaningful for the
  /// symmetric built-in kinds.
  [[nodiscard]] double radial(double ref_length, double def_length) const;

  /// Declared homogeneity degree beta: w(t x, t y) = t^beta w(x, y).
  [[nodiscard]] std::optional<double> homogeneity() const { return beta_; }

  [[nodiscard]] std::optional<double> horizon() const { return horizon_; }
  [[nodiscard]] PairwisePotential with_horizon(double delta) const;

  /// factor * w, same kind.
  [[nodiscard]] PairwisePotential scaled(double factor) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::vector<PowerTerm>& terms() const { return terms_; }
  [[nodiscard]] const std::optional<ScalarProfile>& profile() const { return profile_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] std::string describe() const;

 private:
  PairwisePotential() = default;

  Kind kind_ = Kind::power_sum;
  std::vector<PowerTerm> terms_;
  std::optional<ScalarProfile> profile_;
  std::string custom_name_;
  std::shared_ptr<const std::function<double(const Vector&, const Vector&)>> custom_;
  std::optional<double> beta_;
  std::optional<double> horizon_;
  double scale_ = 1.0;
};

/// w = c |y~|^p / |x~|^q with beta = p - q.
PairwisePotential make_power_bond(double c, double p, double q);

/// Stored-energy density W: R^{n x n} -> R U {+inf}.
///
///   mooney-rivlin        alpha |A|^2 + beta |cof A|^2 + g(det A)
///   incompressible-mr    alpha |A|^2 + beta |cof A|^2 if |det A - 1| <= tol, else +inf
///   frobenius-profile    g(|A|^2)
///   cofactor-profile     g(|cof A|)     (3x3 only)
///   determinant-profile  g(det A)       (3x3 only)
class StoredEnergy {
 public:
  enum class Kind {
    mooney_rivlin,
    incompressible_mr,
    frobenius_profile,
    cofactor_profile,
    determinant_profile,
    custom
  };

  static StoredEnergy custom(std::string name, std::function<ExtendedReal(const Matrix&)> eval);

  /// Throws DimensionError for non-square A.
  ExtendedReal operator()(const Matrix& a) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string kind_name() const;
  /// Display name: the zoo entry it was built from when relabelled, else the kind.
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] StoredEnergy with_label(std::string label) const;
  [[nodiscard]] std::vector<Parameter> parameters() const;
  [[nodiscard]] const std::optional<ScalarProfile>& profile() const { return g_; }
  [[nodiscard]] bool serializable() const;
  [[nodiscard]] std::string describe() const;

 private:
  friend StoredEnergy make_mooney_rivlin(double, double, ScalarProfile);
  friend StoredEnergy make_incompressible_mr(double, double, double);
  friend StoredEnergy make_frobenius_profile(ScalarProfile);
  friend StoredEnergy make_cofactor_profile(ScalarProfile);
  friend StoredEnergy make_determinant_profile(ScalarProfile);
  StoredEnergy() = default;

  Kind kind_ = Kind::custom;
  std::string label_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double det_tol_ = 0.0;
  std::optional<ScalarProfile> g_;
  std::shared_ptr<const std::function<ExtendedReal(const Matrix&)>> custom_;
};

/// alpha |A|^2 + beta |cof A|^2 + g(det A); alpha, beta >= 0. beta = 0 is Neo-Hookean.
StoredEnergy make_mooney_rivlin(double alpha, double beta, ScalarProfile g);
StoredEnergy make_neo_hookean(double alpha, ScalarProfile g);
/// Mooney-Rivlin restricted to det A = 1 (within det_tol), +inf elsewhere.
StoredEnergy make_incompressible_mr(double alpha, double beta, double det_tol = 1e-9);
StoredEnergy make_frobenius_profile(ScalarProfile g);
StoredEnergy make_cofactor_profile(ScalarProfile g);
StoredEnergy make_determinant_profile(ScalarProfile g);

enum class ProfileArgument { frobenius_squared, cofactor_norm, determinant };
/// Dispatches to the three profile constructors above.
StoredEnergy make_profile_energy(ProfileArgument arg, ScalarProfile g);

/// |A|^2.
StoredEnergy make_frobenius_squared();
/// a + b |A|^2.
StoredEnergy make_affine_frobenius(double a, double b);

}  // namespace perilimit
