#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "perilimit/extended_real.hpp"

namespace perilimit {

/// Named real parameter of a model, in declaration order.
using Parameter = std::pair<std::string, double>;

/// Scalar function g: t -> ExtendedReal from a closed family, used as the
/// g of Mooney-Rivlin densities and of profile densities g(|A|^2),
/// g(|cof A|), g(det A).
///
///   power             c * t^p
///   affine-in-square  a + b * t^2
///   well              c * (t - 1)^2
///   indicator         0 if |t - 1| <= tol, +inf otherwise
///
/// `custom` wraps an arbitrary evaluator; it is not serializable.
class ScalarProfile {
 public:
  enum class Kind { power, affine_in_square, well, indicator, custom };

  static ScalarProfile power(double coef, double exponent);
  static ScalarProfile affine_in_square(double a, double b);
  static ScalarProfile well(double coef = 1.0);
  static ScalarProfile indicator_of_one(double tol = 1e-9);
  /// g == 0, spelled as affine-in-square with a = b = 0.
  static ScalarProfile zero() { return affine_in_square(0.0, 0.0); }
  static ScalarProfile custom(std::string name, std::function<ExtendedReal(double)> eval);

  ExtendedReal operator()(double t) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  /// Kind tag as used in config files ("power", "well", ...).
  [[nodiscard]] std::string kind_name() const;
  [[nodiscard]] std::vector<Parameter> parameters() const;
  [[nodiscard]] bool serializable() const { return kind_ != Kind::custom; }
  /// Human-readable formula, e.g. "1*(t-1)^2".
  [[nodiscard]] std::string describe() const;

 private:
  ScalarProfile(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::string custom_name_;
  std::shared_ptr<const std::function<ExtendedReal(double)>> custom_;
};

/// Parses a kind tag; throws DomainError for unknown names.
ScalarProfile::Kind profile_kind_from_name(std::string_view name);

}  // namespace perilimit
