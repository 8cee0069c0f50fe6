#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace perilimit::cli {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string type_name(ValueType t) {
  switch (t) {
    case ValueType::integer:
      return "int";
    case ValueType::real:
      return "real";
    case ValueType::text:
      return "string";
    case ValueType::real_list:
      return "list of reals";
    case ValueType::real_or_auto:
      return "real or auto";
    case ValueType::boolean:
      return "bool";
  }
  return "?";
}

double parse_real(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(where + ": expected a real number, got '" + raw + "'");
  }
  return v;
}

long long parse_integer(const std::string& where, const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(where + ": expected an integer, got '" + raw + "'");
  }
  return v;
}

Value parse_value(const KeySpec& spec, const std::string& raw) {
  const std::string where = spec.section + "." + spec.key;
  switch (spec.type) {
    case ValueType::integer:
      return parse_integer(where, raw);
    case ValueType::real:
      return parse_real(where, raw);
    case ValueType::text:
      return trim(raw);
    case ValueType::real_or_auto:
      if (trim(raw) == "auto") return std::string("auto");
      return parse_real(where, raw);
    case ValueType::boolean: {
      const std::string s = trim(raw);
      if (s == "true" || s == "1" || s == "yes") return true;
      if (s == "false" || s == "0" || s == "no") return false;
      throw ConfigError(where + ": expected true or false, got '" + raw + "'");
    }
    case ValueType::real_list: {
      std::string s = trim(raw);
      if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
      std::vector<double> out;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_real(where, item));
      if (out.empty()) throw ConfigError(where + ": empty list");
      return out;
    }
  }
  throw ConfigError(where + ": unsupported type");
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const auto& s : schema()) {
    if (s.section == section && s.key == key) return &s;
  }
  return nullptr;
}

bool has_section(const std::string& section) {
  return std::any_of(schema().begin(), schema().end(), [&](const KeySpec& s) { return s.section == section; });
}

Json value_to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::vector<double>>) {
          Json arr = Json::array();
          for (double d : x) arr.push_back(d);
          return arr;
        } else {
          return Json(x);
        }
      },
      v);
}

}  // namespace

const std::vector<KeySpec>& schema() {
  using T = ValueType;
  static const std::vector<KeySpec> keys = {
      {"run", "task", T::text, "recoverability",
       "quadrature-check | gamma-limit | recoverability | convexify | converge | counterexamples"},
      {"run", "dim", T::integer, "3", "space dimension n (2 or 3)"},
      {"run", "seed", T::integer, "1", "seed for every random sample"},
      {"run", "threads", T::integer, "1", "worker thread cap"},

      {"density", "kind", T::text, "frobenius-squared", "stored-energy zoo entry (see --list-zoo)"},
      {"density", "alpha", T::real, "1", "coefficient of |A|^2"},
      {"density", "beta", T::real, "1", "coefficient of |cof A|^2"},
      {"density", "a", T::real, "1", "affine-frobenius constant"},
      {"density", "b", T::real, "2", "affine-frobenius slope"},
      {"density", "det_tol", T::real, "1e-9", "incompressible-mr tolerance on |det A - 1|"},
      {"density", "g.kind", T::text, "well", "profile g: power | affine-in-square | well | indicator"},
      {"density", "g.c", T::real, "1", "power / well coefficient"},
      {"density", "g.p", T::real, "2", "power exponent"},
      {"density", "g.a", T::real, "0", "affine-in-square constant"},
      {"density", "g.b", T::real, "1", "affine-in-square slope"},
      {"density", "g.tol", T::real, "1e-9", "indicator tolerance"},

      {"potential", "kind", T::text, "power-bond", "bond potential zoo entry (see --list-zoo)"},
      {"potential", "c", T::real_or_auto, "auto", "power-bond coefficient; auto = n / |S^{n-1}|"},
      {"potential", "p", T::real, "2", "power-bond exponent of |y~|"},
      {"potential", "q", T::real, "2", "power-bond exponent of |x~|"},
      {"potential", "g.kind", T::text, "power", "ratio-profile g"},
      {"potential", "g.c", T::real, "1", "power / well coefficient"},
      {"potential", "g.p", T::real, "2", "power exponent"},
      {"potential", "g.a", T::real, "0", "affine-in-square constant"},
      {"potential", "g.b", T::real, "1", "affine-in-square slope"},
      {"potential", "g.tol", T::real, "1e-9", "indicator tolerance"},

      {"quadrature", "order", T::integer, "0",
       "points on S^1 / Gauss-Legendre order on S^2; 0 = 64 and 32"},
      {"quadrature", "weight_tol", T::real, "1e-12", "tolerance on the weight sum"},
      {"quadrature", "moment_tol", T::real, "1e-10", "tolerance on second and fourth moments"},

      {"gamma", "beta", T::real_or_auto, "auto", "homogeneity degree; auto = estimate"},
      {"gamma", "beta_samples", T::integer, "16", "random bonds for the estimate"},
      {"gamma", "samples", T::integer, "20", "random matrices A (entries in [-1, 1])"},
      {"gamma", "trials", T::integer, "50", "rotation pairs per matrix in the invariance check"},
      {"gamma", "compare_density", T::boolean, "false", "compare the local density with [density]"},
      {"gamma", "compare_tol", T::real, "1e-8", "absolute tolerance of that comparison"},

      {"recoverability", "tolerance", T::real, "1e-6", "relative residual tolerance"},
      {"recoverability", "random", T::integer, "20", "random matrices added to the test battery"},

      {"convexify", "dim", T::integer, "3", "matrix size of the lattice (1..3)"},
      {"convexify", "subspace", T::text, "diagonal", "full | diagonal"},
      {"convexify", "bound", T::real, "3", "lattice half-width L"},
      {"convexify", "step", T::real, "0.1", "lattice spacing h"},
      {"convexify", "tolerance", T::real, "1e-6", "sweep stopping tolerance"},
      {"convexify", "max_sweeps", T::integer, "100", "sweep cap"},
      {"convexify", "extra_directions", T::integer, "0", "random rank-one directions added"},
      {"convexify", "expect", T::text, "none", "none | fixed-point"},
      {"convexify", "fixed_point_tol", T::real, "1e-5", "allowed interior change for fixed-point"},

      {"converge", "deltas", T::real_list, "0.2, 0.1, 0.05, 0.025", "horizons, strictly decreasing"},
      {"converge", "sides", T::real_list, "1, 1", "box side lengths (dimension = list length)"},
      {"converge", "cells_per_delta", T::integer, "8", "grid cells per horizon"},
      {"converge", "deformation", T::text, "affine", "affine | quadratic"},
      {"converge", "matrix", T::real_list, "1, 0, 0, 2", "A, row-major"},
      {"converge", "kappa", T::real, "0.5", "quadratic curvature"},
      {"converge", "interior_only", T::boolean, "false", "restrict the outer integral to the interior"},
      {"converge", "radial_points", T::integer, "6", "Gauss-Legendre nodes per ray"},
      {"converge", "min_slope", T::real, "0.9", "pass threshold on the fitted slope (affine)"},

      {"counterexamples", "stretches", T::real_list, "1, 1.5, 2, 3, 5, 10, 20, 50, 100",
       "lambda values of the Mooney-Rivlin scan"},
      {"counterexamples", "jensen_stretches", T::real_list, "1, 1.5, 2, 4", "lambda values of the cofactor family"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const auto& s : schema()) values_[s.section + "." + s.key] = parse_value(s, s.default_value);
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& text) {
  const KeySpec* spec = find_spec(section, key);
  if (!spec) {
    if (!has_section(section)) throw ConfigError("unknown section [" + section + "]");
    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }
  values_[section + "." + key] = parse_value(*spec, text);
}

void RunConfig::set_json(const std::string& section, const std::string& key, const Json& value) {
  const KeySpec* spec = find_spec(section, key);
  if (!spec) {
    if (!has_section(section)) throw ConfigError("unknown section [" + section + "]");
    throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }
  const std::string where = section + "." + key;
  if (value.is_string()) {
    set(section, key, value.get<std::string>());
  } else if (value.is_boolean()) {
    if (spec->type != ValueType::boolean) throw ConfigError(where + ": unexpected boolean");
    values_[section + "." + key] = value.get<bool>();
  } else if (value.is_number()) {
    if (spec->type == ValueType::integer) {
      if (!value.is_number_integer()) throw ConfigError(where + ": expected an integer");
      values_[section + "." + key] = value.get<long long>();
    } else if (spec->type == ValueType::real || spec->type == ValueType::real_or_auto) {
      values_[section + "." + key] = value.get<double>();
    } else {
      throw ConfigError(where + ": unexpected number");
    }
  } else if (value.is_array()) {
    if (spec->type != ValueType::real_list) throw ConfigError(where + ": unexpected list");
    std::vector<double> out;
    for (const auto& v : value) {
      if (!v.is_number()) throw ConfigError(where + ": list entries must be numbers");
      out.push_back(v.get<double>());
    }
    if (out.empty()) throw ConfigError(where + ": empty list");
    values_[section + "." + key] = out;
  } else {
    throw ConfigError(where + ": unsupported value");
  }
}

void RunConfig::load_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON config: ") + e.what());
    }
    for (const auto& [section, body] : j.items()) {
      if (!body.is_object()) throw ConfigError("section '" + section + "' must be an object");
      for (const auto& [key, value] : body.items()) {
        if (value.is_object()) {
          for (const auto& [sub, v] : value.items()) set_json(section, key + "." + sub, v);
        } else {
          set_json(section, key, value);
        }
      }
    }
    return;
  }
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed INI config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside any section");
    if (!has_section(section)) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : body) set(section, key, value.get_value<std::string>());
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str());
}

const Value& RunConfig::get(const std::string& section, const std::string& key) const {
  auto it = values_.find(section + "." + key);
  if (it == values_.end()) throw ConfigError("internal: no key " + section + "." + key);
  return it->second;
}

long long RunConfig::integer(const std::string& section, const std::string& key) const {
  return std::get<long long>(get(section, key));
}

double RunConfig::real(const std::string& section, const std::string& key) const {
  const Value& v = get(section, key);
  if (const auto* s = std::get_if<std::string>(&v)) {
    throw ConfigError(section + "." + key + " is '" + *s + "', not a number");
  }
  return std::get<double>(v);
}

const std::string& RunConfig::text(const std::string& section, const std::string& key) const {
  return std::get<std::string>(get(section, key));
}

const std::vector<double>& RunConfig::reals(const std::string& section, const std::string& key) const {
  return std::get<std::vector<double>>(get(section, key));
}

bool RunConfig::flag(const std::string& section, const std::string& key) const {
  return std::get<bool>(get(section, key));
}

bool RunConfig::is_auto(const std::string& section, const std::string& key) const {
  const auto* s = std::get_if<std::string>(&get(section, key));
  return s && *s == "auto";
}

Json RunConfig::to_json() const {
  Json out = Json::object();
  for (const auto& s : schema()) {
    Json value = value_to_json(get(s.section, s.key));
    const auto dot = s.key.find('.');
    if (dot == std::string::npos) {
      out[s.section][s.key] = value;
    } else {
      out[s.section][s.key.substr(0, dot)][s.key.substr(dot + 1)] = value;
    }
  }
  return out;
}

std::string describe_schema() {
  std::ostringstream os;
  std::string current;
  for (const auto& s : schema()) {
    if (s.section != current) {
      os << "[" << s.section << "]\n";
      current = s.section;
    }
    os << "  " << s.key << " (" << type_name(s.type) << ", default " << s.default_value << "): " << s.doc << "\n";
  }
  return os.str();
}

}  // namespace perilimit::cli
