#include "perilimit/potentials.hpp"

#include <cmath>

#include "perilimit/errors.hpp"
#include "perilimit/format.hpp"

namespace perilimit {

// ---------------------------------------------------------------- PairwisePotential

PairwisePotential PairwisePotential::power_sum(std::vector<PowerTerm> terms) {
  if (terms.empty()) throw DomainError("power_sum: at least one term required");
  PairwisePotential w;
  w.kind_ = Kind::power_sum;
  w.terms_ = std::move(terms);
  const double beta = w.terms_.front().p - w.terms_.front().q;
  bool homogeneous = true;
  for (const auto& t : w.terms_) homogeneous = homogeneous && (t.p - t.q == beta);
  if (homogeneous) w.beta_ = beta;
  return w;
}

PairwisePotential PairwisePotential::ratio_profile(ScalarProfile g) {
  PairwisePotential w;
  w.kind_ = Kind::ratio_profile;
  w.profile_ = std::move(g);
  w.beta_ = 0.0;
  return w;
}

PairwisePotential PairwisePotential::custom(std::string name,
                                            std::function<double(const Vector&, const Vector&)> eval,
                                            std::optional<double> homogeneity) {
  PairwisePotential w;
  w.kind_ = Kind::custom;
  w.custom_name_ = std::move(name);
  w.custom_ = std::make_shared<const std::function<double(const Vector&, const Vector&)>>(std::move(eval));
  w.beta_ = homogeneity;
  return w;
}

double PairwisePotential::operator()(const Vector& ref_bond, const Vector& def_bond) const {
  const double r = ref_bond.norm();
  if (horizon_ && r > *horizon_) return 0.0;
  if (kind_ == Kind::custom) return scale_ * (*custom_)(ref_bond, def_bond);
  return radial(r, def_bond.norm());
}

double PairwisePotential::radial(double ref_length, double def_length) const {
  if (kind_ == Kind::custom) throw DomainError("radial form is undefined for custom potentials");
  if (!(ref_length > 0.0)) throw DomainError("pairwise potential evaluated at zero reference bond");
  if (horizon_ && ref_length > *horizon_) return 0.0;
  if (kind_ == Kind::ratio_profile) {
    const ExtendedReal v = (*profile_)(def_length / ref_length);
    if (v.is_infinite()) throw DomainError("ratio-profile potential: profile is +inf");
    return scale_ * v.value();
  }
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (t.coef == 0.0) continue;
    const double num = (t.p == 0.0) ? 1.0 : std::pow(def_length, t.p);
    sum += t.coef * num / std::pow(ref_length, t.q);
  }
  return scale_ * sum;
}

PairwisePotential PairwisePotential::with_horizon(double delta) const {
  if (!(delta > 0.0)) throw DomainError("horizon must be positive");
  PairwisePotential w = *this;
  w.horizon_ = delta;
  return w;
}

PairwisePotential PairwisePotential::scaled(double factor) const {
  PairwisePotential w = *this;
  w.scale_ *= factor;
  return w;
}

std::string PairwisePotential::name() const {
  switch (kind_) {
    case Kind::power_sum:
      return terms_.size() == 1 ? "power-bond" : "power-sum";
    case Kind::ratio_profile:
      return "ratio-profile";
    case Kind::custom:
      return "custom:" + custom_name_;
  }
  return "unknown";
}

std::string PairwisePotential::describe() const {
  std::string s;
  if (scale_ != 1.0) s = format_double(scale_) + "*(";
  switch (kind_) {
    case Kind::power_sum:
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (k) s += " + ";
        s += format_double(terms_[k].coef) + "*|y|^" + format_double(terms_[k].p) + "/|x|^" +
             format_double(terms_[k].q);
      }
      break;
    case Kind::ratio_profile:
      s += "g(|y|/|x|), g(t)=" + profile_->describe();
      break;
    case Kind::custom:
      s += custom_name_;
      break;
  }
  if (scale_ != 1.0) s += ")";
  return s;
}

PairwisePotential make_power_bond(double c, double p, double q) {
  return PairwisePotential::power_sum({{c, p, q}});
}

// ---------------------------------------------------------------- StoredEnergy

namespace {

void require_square(const Matrix& a) {
  if (!a.is_square()) throw DimensionError("stored energy: argument must be a square matrix");
}

void require_3x3(const Matrix& a, const char* what) {
  if (a.rows() != 3 || a.cols() != 3) {
    throw DimensionError(std::string(what) + " is defined for 3x3 matrices only");
  }
}

StoredEnergy labelled(StoredEnergy w, const char* label) { return w.with_label(label); }

}  // namespace

StoredEnergy StoredEnergy::custom(std::string name, std::function<ExtendedReal(const Matrix&)> eval) {
  StoredEnergy w;
  w.kind_ = Kind::custom;
  w.label_ = std::move(name);
  w.custom_ = std::make_shared<const std::function<ExtendedReal(const Matrix&)>>(std::move(eval));
  return w;
}

ExtendedReal StoredEnergy::operator()(const Matrix& a) const {
  require_square(a);
  switch (kind_) {
    case Kind::mooney_rivlin: {
      ExtendedReal v(alpha_ * frobenius_squared(a));
      if (beta_ != 0.0) v += beta_ * frobenius_squared(cofactor(a));
      return v + (*g_)(determinant(a));
    }
    case Kind::incompressible_mr: {
      if (std::abs(determinant(a) - 1.0) > det_tol_) return ExtendedReal::infinity();
      double v = alpha_ * frobenius_squared(a);
      if (beta_ != 0.0) v += beta_ * frobenius_squared(cofactor(a));
      return ExtendedReal(v);
    }
    case Kind::frobenius_profile:
      return (*g_)(frobenius_squared(a));
    case Kind::cofactor_profile:
      require_3x3(a, "cofactor-profile density");
      return (*g_)(frobenius(cofactor(a)));
    case Kind::determinant_profile:
      require_3x3(a, "determinant-profile density");
      return (*g_)(determinant(a));
    case Kind::custom:
      return (*custom_)(a);
  }
  return ExtendedReal(0.0);
}

std::string StoredEnergy::kind_name() const {
  switch (kind_) {
    case Kind::mooney_rivlin:
      return "mooney-rivlin";
    case Kind::incompressible_mr:
      return "incompressible-mr";
    case Kind::frobenius_profile:
      return "profile-frobenius";
    case Kind::cofactor_profile:
      return "profile-cof";
    case Kind::determinant_profile:
      return "profile-det";
    case Kind::custom:
      return "custom";
  }
  return "unknown";
}

StoredEnergy StoredEnergy::with_label(std::string label) const {
  StoredEnergy w = *this;
  w.label_ = std::move(label);
  return w;
}

std::vector<Parameter> StoredEnergy::parameters() const {
  switch (kind_) {
    case Kind::mooney_rivlin:
      return {{"alpha", alpha_}, {"beta", beta_}};
    case Kind::incompressible_mr:
      return {{"alpha", alpha_}, {"beta", beta_}, {"det_tol", det_tol_}};
    default:
      return {};
  }
}

bool StoredEnergy::serializable() const {
  if (kind_ == Kind::custom) return false;
  return !g_ || g_->serializable();
}

std::string StoredEnergy::describe() const {
  switch (kind_) {
    case Kind::mooney_rivlin:
      return format_double(alpha_) + "|A|^2 + " + format_double(beta_) + "|cof A|^2 + g(det A), g(t)=" +
             g_->describe();
    case Kind::incompressible_mr:
      return format_double(alpha_) + "|A|^2 + " + format_double(beta_) + "|cof A|^2 if det A = 1, else inf";
    case Kind::frobenius_profile:
      return "g(|A|^2), g(t)=" + g_->describe();
    case Kind::cofactor_profile:
      return "g(|cof A|), g(t)=" + g_->describe();
    case Kind::determinant_profile:
      return "g(det A), g(t)=" + g_->describe();
    case Kind::custom:
      return label_;
  }
  return "";
}

StoredEnergy make_mooney_rivlin(double alpha, double beta, ScalarProfile g) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("mooney-rivlin: alpha and beta must be >= 0");
  StoredEnergy w;
  w.kind_ = StoredEnergy::Kind::mooney_rivlin;
  w.label_ = "mooney-rivlin";
  w.alpha_ = alpha;
  w.beta_ = beta;
  w.g_ = std::move(g);
  return w;
}

StoredEnergy make_neo_hookean(double alpha, ScalarProfile g) {
  return labelled(make_mooney_rivlin(alpha, 0.0, std::move(g)), "neo-hookean");
}

StoredEnergy make_incompressible_mr(double alpha, double beta, double det_tol) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw DomainError("incompressible-mr: alpha and beta must be >= 0");
  if (!(det_tol >= 0.0)) throw DomainError("incompressible-mr: det tolerance must be >= 0");
  StoredEnergy w;
  w.kind_ = StoredEnergy::Kind::incompressible_mr;
  w.label_ = "incompressible-mr";
  w.alpha_ = alpha;
  w.beta_ = beta;
  w.det_tol_ = det_tol;
  return w;
}

StoredEnergy make_frobenius_profile(ScalarProfile g) {
  StoredEnergy w;
  w.kind_ = StoredEnergy::Kind::frobenius_profile;
  w.label_ = "profile-frobenius";
  w.g_ = std::move(g);
  return w;
}

StoredEnergy make_cofactor_profile(ScalarProfile g) {
  StoredEnergy w;
  w.kind_ = StoredEnergy::Kind::cofactor_profile;
  w.label_ = "profile-cof";
  w.g_ = std::move(g);
  return w;
}

StoredEnergy make_determinant_profile(ScalarProfile g) {
  StoredEnergy w;
  w.kind_ = StoredEnergy::Kind::determinant_profile;
  w.label_ = "profile-det";
  w.g_ = std::move(g);
  return w;
}

StoredEnergy make_profile_energy(ProfileArgument arg, ScalarProfile g) {
  switch (arg) {
    case ProfileArgument::frobenius_squared:
      return make_frobenius_profile(std::move(g));
    case ProfileArgument::cofactor_norm:
      return make_cofactor_profile(std::move(g));
    case ProfileArgument::determinant:
      return make_determinant_profile(std::move(g));
  }
  throw DomainError("make_profile_energy: unknown argument kind");
}

StoredEnergy make_frobenius_squared() {
  return labelled(make_frobenius_profile(ScalarProfile::power(1.0, 1.0)), "frobenius-squared");
}

StoredEnergy make_affine_frobenius(double a, double b) {
  if (!(b >= 0.0)) throw DomainError("affine-frobenius: b must be >= 0");
  return labelled(make_mooney_rivlin(b, 0.0, ScalarProfile::affine_in_square(a, 0.0)), "affine-frobenius");
}

}  // namespace perilimit
