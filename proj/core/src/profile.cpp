#include "perilimit/profile.hpp"

#include <cmath>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"

namespace perilimit {

ScalarProfile ScalarProfile::power(double coef, double exponent) {
  return ScalarProfile(Kind::power, coef, exponent);
}

ScalarProfile ScalarProfile::affine_in_square(double a, double b) {
  return ScalarProfile(Kind::affine_in_square, a, b);
}

ScalarProfile ScalarProfile::well(double coef) { return ScalarProfile(Kind::well, coef, 0.0); }

ScalarProfile ScalarProfile::indicator_of_one(double tol) {
  if (!(tol >= 0.0)) throw DomainError("indicator profile: tolerance must be >= 0");
  return ScalarProfile(Kind::indicator, tol, 0.0);
}

ScalarProfile ScalarProfile::custom(std::string name, std::function<ExtendedReal(double)> eval) {
  ScalarProfile p(Kind::custom, 0.0, 0.0);
  p.custom_name_ = std::move(name);
  p.custom_ = std::make_shared<const std::function<ExtendedReal(double)>>(std::move(eval));
  return p;
}

ExtendedReal ScalarProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::power: {
      if (a_ == 0.0) return ExtendedReal(0.0);
      if (t == 0.0 && b_ < 0.0) {
        if (a_ < 0.0) throw DomainError("power profile: -inf at t = 0");
        return ExtendedReal::infinity();
      }
      const double v = a_ * std::pow(t, b_);
      if (std::isnan(v)) {
        throw DomainError("power profile: t^" + format_double(b_) + " undefined at t = " + format_double(t));
      }
      return ExtendedReal(v);
    }
    case Kind::affine_in_square:
      return ExtendedReal(a_ + b_ * t * t);
    case Kind::well:
      return ExtendedReal(a_ * (t - 1.0) * (t - 1.0));
    case Kind::indicator:
      return std::abs(t - 1.0) <= a_ ? ExtendedReal(0.0) : ExtendedReal::infinity();
    case Kind::custom:
      return (*custom_)(t);
  }
  return ExtendedReal(0.0);
}

std::string ScalarProfile::kind_name() const {
  switch (kind_) {
    case Kind::power:
      return "power";
    case Kind::affine_in_square:
      return "affine-in-square";
    case Kind::well:
      return "well";
    case Kind::indicator:
      return "indicator";
    case Kind::custom:
      return "custom:" + custom_name_;
  }
  return "unknown";
}

std::vector<Parameter> ScalarProfile::parameters() const {
  switch (kind_) {
    case Kind::power:
      return {{"c", a_}, {"p", b_}};
    case Kind::affine_in_square:
      return {{"a", a_}, {"b", b_}};
    case Kind::well:
      return {{"c", a_}};
    case Kind::indicator:
      return {{"tol", a_}};
    case Kind::custom:
      return {};
  }
  return {};
}

std::string ScalarProfile::describe() const {
  switch (kind_) {
    case Kind::power:
      return format_double(a_) + "*t^" + format_double(b_);
    case Kind::affine_in_square:
      return format_double(a_) + "+" + format_double(b_) + "*t^2";
    case Kind::well:
      return format_double(a_) + "*(t-1)^2";
    case Kind::indicator:
      return "indicator{|t-1|<=" + format_double(a_) + "}";
    case Kind::custom:
      return custom_name_;
  }
  return "";
}

ScalarProfile::Kind profile_kind_from_name(std::string_view name) {
  if (name == "power") return ScalarProfile::Kind::power;
  if (name == "affine-in-square") return ScalarProfile::Kind::affine_in_square;
  if (name == "well") return ScalarProfile::Kind::well;
  if (name == "indicator") return ScalarProfile::Kind::indicator;
  throw DomainError("unknown profile kind '" + std::string(name) +
                    "' (expected power, affine-in-square, well, indicator)");
}

}  // namespace perilimit
