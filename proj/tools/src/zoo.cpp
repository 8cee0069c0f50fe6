#include "zoo.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "perilimit/errors.hpp"
#include "perilimit/quadrature.hpp"

namespace perilimit::cli {

namespace {

struct ZooEntry {
  const char* family;
  const char* name;
  const char* formula;
  const char* keys;
};

const std::vector<ZooEntry>& entries() {
  static const std::vector<ZooEntry> zoo = {
      {"density", "frobenius-squared", "|A|^2", "(none)"},
      {"density", "affine-frobenius", "a + b |A|^2", "a, b"},
      {"density", "neo-hookean", "alpha |A|^2 + g(det A)", "alpha, g.*"},
      {"density", "mooney-rivlin", "alpha |A|^2 + beta |cof A|^2 + g(det A)", "alpha, beta, g.*"},
      {"density", "incompressible-mr", "alpha |A|^2 + beta |cof A|^2 on det A = 1, +inf elsewhere",
       "alpha, beta, det_tol"},
      {"density", "profile-frobenius", "g(|A|^2)", "g.*"},
      {"density", "profile-cof", "g(|cof A|), n = 3", "g.*"},
      {"density", "profile-det", "g(det A), n = 3", "g.*"},
      {"potential", "power-bond", "c |y~|^p / |x~|^q, beta = p - q", "c (real or auto), p, q"},
      {"potential", "ratio-profile", "g(|y~| / |x~|), beta = 0", "g.*"},
  };
  return zoo;
}

}  // namespace

ScalarProfile profile_from_config(const RunConfig& cfg, const std::string& section) {
  const std::string& kind = cfg.text(section, "g.kind");
  try {
    switch (profile_kind_from_name(kind)) {
      case ScalarProfile::Kind::power:
        return ScalarProfile::power(cfg.real(section, "g.c"), cfg.real(section, "g.p"));
      case ScalarProfile::Kind::affine_in_square:
        return ScalarProfile::affine_in_square(cfg.real(section, "g.a"), cfg.real(section, "g.b"));
      case ScalarProfile::Kind::well:
        return ScalarProfile::well(cfg.real(section, "g.c"));
      case ScalarProfile::Kind::indicator:
        return ScalarProfile::indicator_of_one(cfg.real(section, "g.tol"));
      case ScalarProfile::Kind::custom:
        break;
    }
  } catch (const perilimit::Error& e) {
    throw ConfigError(section + ".g: " + e.what());
  }
  throw ConfigError(section + ".g.kind: '" + kind + "' cannot be configured");
}

StoredEnergy density_from_config(const RunConfig& cfg) {
  const std::string& kind = cfg.text("density", "kind");
  const double alpha = cfg.real("density", "alpha");
  const double beta = cfg.real("density", "beta");
  try {
    StoredEnergy w = [&] {
      if (kind == "frobenius-squared") return make_frobenius_squared();
      if (kind == "affine-frobenius") return make_affine_frobenius(cfg.real("density", "a"), cfg.real("density", "b"));
      if (kind == "neo-hookean") return make_neo_hookean(alpha, profile_from_config(cfg, "density"));
      if (kind == "mooney-rivlin") return make_mooney_rivlin(alpha, beta, profile_from_config(cfg, "density"));
      if (kind == "incompressible-mr") return make_incompressible_mr(alpha, beta, cfg.real("density", "det_tol"));
      if (kind == "profile-frobenius") return make_frobenius_profile(profile_from_config(cfg, "density"));
      if (kind == "profile-cof") return make_cofactor_profile(profile_from_config(cfg, "density"));
      if (kind == "profile-det") return make_determinant_profile(profile_from_config(cfg, "density"));
      throw ConfigError("density.kind: unknown density '" + kind + "' (see --list-zoo)");
    }();
    return w.with_label(kind);
  } catch (const perilimit::Error& e) {
    throw ConfigError(std::string("density: ") + e.what());
  }
}

PairwisePotential potential_from_config(const RunConfig& cfg, int n) {
  const std::string& kind = cfg.text("potential", "kind");
  try {
    if (kind == "power-bond") {
      const double c = cfg.is_auto("potential", "c") ? n / sphere_measure(n) : cfg.real("potential", "c");
      return make_power_bond(c, cfg.real("potential", "p"), cfg.real("potential", "q"));
    }
    if (kind == "ratio-profile") return PairwisePotential::ratio_profile(profile_from_config(cfg, "potential"));
  } catch (const perilimit::Error& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("potential.kind: unknown potential '" + kind + "' (see --list-zoo)");
}

Json profile_to_json(const ScalarProfile& g) {
  if (!g.serializable()) throw ConfigError("profile " + g.describe() + " is not serializable");
  Json j = Json::object();
  j["kind"] = g.kind_name();
  for (const auto& [key, value] : g.parameters()) j[key] = value;
  return j;
}

ScalarProfile profile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("profile: object with a string 'kind' expected");
  }
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      cfg.set("density", "g.kind", value.get<std::string>());
    } else if (value.is_number()) {
      cfg.set("density", "g." + key, value.dump());
    } else {
      throw ConfigError("profile: parameter '" + key + "' must be a number");
    }
  }
  return profile_from_config(cfg, "density");
}

std::string list_zoo() {
  std::ostringstream os;
  std::string family;
  for (const auto& e : entries()) {
    if (e.family != family) {
      family = e.family;
      os << (family == "density" ? "densities [density]\n" : "potentials [potential]\n");
    }
    os << "  " << e.name << "\n    " << e.formula << "\n    keys: " << e.keys << "\n";
  }
  os << "profiles g (g.kind)\n"
     << "  power             g.c * t^g.p\n"
     << "  affine-in-square  g.a + g.b * t^2\n"
     << "  well              g.c * (t - 1)^2\n"
     << "  indicator         0 if |t - 1| <= g.tol, +inf otherwise\n";
  return os.str();
}

}  // namespace perilimit::cli
