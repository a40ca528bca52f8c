#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiral/cli/trajectory_io.hpp"
#include "chiral/dynamics.hpp"

namespace chiral::cli {

struct OutputSpec {
  std::string path;
  std::string format;  ///< "csv" or "json"

  bool operator==(const OutputSpec&) const = default;
};

/// Settings of one simulate run. Field names double as the JSON keys.
struct RunConfig {
  Formulation formulation = Formulation::CanonicalBracketDiracH;
  Params params{1.0, 1.0};
  Vector initial;
  double dt = 1e-3;
  double t_end = 10.0;
  Method method = Method::RK4;
  std::vector<OutputSpec> outputs;
};

inline bool same_settings(const RunConfig& a, const RunConfig& b) {
  return a.formulation == b.formulation && a.params == b.params && a.initial.size() == b.initial.size() &&
         a.initial == b.initial && a.dt == b.dt && a.t_end == b.t_end && a.method == b.method &&
         a.outputs == b.outputs;
}

inline std::string format_from_path(const std::string& path) {
  if (has_suffix(path, ".json")) return "json";
  if (has_suffix(path, ".csv")) return "csv";
  throw InputError("outputs", "cannot infer format of '" + path + "' (use .csv or .json)");
}

inline Formulation formulation_from_name(const std::string& name) {
  const auto f = parse_formulation(name);
  if (!f) {
    throw InputError("formulation",
                     "unknown '" + name + "' (expected canonical_dirac_h, dirac_canonical_h, darboux, reduced)");
  }
  return *f;
}

inline Method method_from_name(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw InputError("method", "unknown '" + name + "' (expected rk4 or implicit_midpoint)");
  return *m;
}

/// Checks cross-field constraints; throws InputError naming the field.
inline void validate(const RunConfig& c) {
  const int dim = state_dim(c.formulation);
  if (c.initial.size() != dim) {
    throw InputError("initial", "expected " + std::to_string(dim) + " values for " +
                                    std::string(to_string(c.formulation)) + ", got " +
                                    std::to_string(c.initial.size()));
  }
  if (!c.initial.allFinite()) throw InputError("initial", "values must be finite");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InputError("dt", "must be positive");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw InputError("t_end", "must be positive");
  if (c.dt > c.t_end) throw InputError("dt", "must not exceed t_end");
  if (c.formulation == Formulation::DarbouxCanonicalH && c.params.lambda() <= 0.0) {
    throw InputError("params.lambda", "the darboux formulation needs lambda > 0");
  }
  for (const OutputSpec& o : c.outputs) {
    if (o.format != "csv" && o.format != "json") throw InputError("outputs", "format must be csv or json");
  }
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["formulation"] = std::string(to_string(c.formulation));
  j["params"] = {{"lambda", c.params.lambda()}, {"mass", c.params.mass()}};
  j["initial"] = std::vector<double>(c.initial.data(), c.initial.data() + c.initial.size());
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["method"] = std::string(to_string(c.method));
  auto& outs = j["outputs"] = nlohmann::json::array();
  for (const OutputSpec& o : c.outputs) outs.push_back({{"path", o.path}, {"format", o.format}});
  return j;
}

namespace detail {
template <typename T>
T field(const nlohmann::json& j, const char* key, const std::string& name) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(name, "missing or wrong type");
  }
}
}  // namespace detail

/// Parses a config object; missing keys keep their defaults. Call validate()
/// once command-line overrides are applied.
inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config", "top level must be an object");
  RunConfig c;
  static const std::vector<std::string> known = {"formulation", "params", "initial", "dt", "t_end", "method",
                                                 "outputs"};
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw InputError(item.key(), "unknown field");
    }
  }
  if (j.contains("formulation")) {
    c.formulation = formulation_from_name(detail::field<std::string>(j, "formulation", "formulation"));
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (!p.is_object()) throw InputError("params", "must be an object");
    const double lam = p.contains("lambda") ? detail::field<double>(p, "lambda", "params.lambda") : 1.0;
    const double mass = p.contains("mass") ? detail::field<double>(p, "mass", "params.mass") : 1.0;
    try {
      c.params = Params(lam, mass);
    } catch (const Error& e) {
      throw InputError("params", e.what());
    }
  }
  if (j.contains("initial")) {
    const auto init = detail::field<std::vector<double>>(j, "initial", "initial");
    c.initial = Eigen::Map<const Vector>(init.data(), static_cast<Eigen::Index>(init.size()));
  }
  if (j.contains("dt")) c.dt = detail::field<double>(j, "dt", "dt");
  if (j.contains("t_end")) c.t_end = detail::field<double>(j, "t_end", "t_end");
  if (j.contains("method")) c.method = method_from_name(detail::field<std::string>(j, "method", "method"));
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) throw InputError("outputs", "must be an array");
    for (const auto& o : j["outputs"]) {
      OutputSpec spec;
      spec.path = detail::field<std::string>(o, "path", "outputs.path");
      spec.format = o.contains("format") ? detail::field<std::string>(o, "format", "outputs.format")
                                         : format_from_path(spec.path);
      c.outputs.push_back(std::move(spec));
    }
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config", e.what());
  }
  return config_from_json(j);
}

}  // namespace chiral::cli
