#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chiral/dynamics.hpp"

namespace chiral::cli {

/// Problem with an input or config file; `field` names what was wrong.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Shortest form that still carries 17 significant digits, independent of locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s, const std::string& field) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InputError(field, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

/// Formulation whose coordinate labels equal `labels`. Both full-space
/// formulations share a header; the canonical-bracket one is returned, which
/// maps states to T*TM the same way. Configuration curves give nullopt.
inline std::optional<Formulation> infer_formulation(const std::vector<std::string>& labels) {
  if (labels == state_labels(Formulation::CanonicalBracketDiracH)) return Formulation::CanonicalBracketDiracH;
  if (labels == state_labels(Formulation::DarbouxCanonicalH)) return Formulation::DarbouxCanonicalH;
  if (labels == state_labels(Formulation::ReducedLiePoisson)) return Formulation::ReducedLiePoisson;
  if (labels == std::vector<std::string>{"x", "y", "xdot", "ydot"}) return std::nullopt;
  std::string joined;
  for (const auto& l : labels) joined += (joined.empty() ? "" : ",") + l;
  throw InputError("header", "unrecognized columns " + joined);
}

inline std::vector<std::string> trajectory_labels(const Trajectory& t) {
  if (!t.labels.empty()) return t.labels;
  if (t.formulation) return state_labels(*t.formulation);
  return {"x", "y", "xdot", "ydot"};
}

inline void write_csv(std::ostream& os, const Trajectory& t) {
  os << 't';
  for (const auto& l : trajectory_labels(t)) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << format_double(t.times[i]);
    for (Eigen::Index k = 0; k < t.states[i].size(); ++k) os << ',' << format_double(t.states[i][k]);
    os << '\n';
  }
}

/// Reads a CSV written by write_csv. Params are not stored in CSV; the caller supplies them.
inline Trajectory read_csv(std::istream& is, const Params& params) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("header", "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split(line, ',');
  if (head.empty() || head.front() != "t") throw InputError("header", "first column must be t");

  Trajectory t;
  for (std::size_t i = 1; i < head.size(); ++i) t.labels.emplace_back(head[i]);
  t.formulation = infer_formulation(t.labels);
  t.params = params;
  const auto width = static_cast<Eigen::Index>(t.labels.size());
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line, ',');
    if (static_cast<Eigen::Index>(cells.size()) != width + 1) {
      throw InputError("row " + std::to_string(row), "expected " + std::to_string(width + 1) + " columns");
    }
    const std::string where = "row " + std::to_string(row);
    t.times.push_back(parse_double(cells[0], where));
    Vector s(width);
    for (Eigen::Index k = 0; k < width; ++k) s[k] = parse_double(cells[k + 1], where);
    t.states.push_back(std::move(s));
  }
  if (t.times.empty()) throw InputError("rows", "no samples");
  return t;
}

inline nlohmann::json trajectory_to_json(const Trajectory& t) {
  nlohmann::json j;
  j["formulation"] = t.formulation ? std::string(to_string(*t.formulation)) : std::string("configuration");
  j["params"] = {{"lambda", t.params.lambda()}, {"mass", t.params.mass()}};
  j["labels"] = trajectory_labels(t);
  j["times"] = t.times;
  auto& states = j["states"] = nlohmann::json::array();
  for (const Vector& s : t.states) states.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  if (!t.warnings.empty()) j["warnings"] = t.warnings;
  return j;
}

inline Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory t;
  try {
    const std::string form = j.at("formulation").get<std::string>();
    if (form != "configuration") {
      const auto f = parse_formulation(form);
      if (!f) throw InputError("formulation", "unknown formulation '" + form + "'");
      t.formulation = f;
    }
    t.params = Params(j.at("params").at("lambda").get<double>(), j.at("params").at("mass").get<double>());
    t.labels = j.at("labels").get<std::vector<std::string>>();
    t.times = j.at("times").get<std::vector<double>>();
    for (const auto& row : j.at("states")) {
      const auto v = row.get<std::vector<double>>();
      if (v.size() != t.labels.size()) throw InputError("states", "row width differs from labels");
      t.states.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("trajectory", e.what());
  } catch (const Error& e) {
    throw InputError("params", e.what());
  }
  if (t.times.size() != t.states.size()) throw InputError("times", "length differs from states");
  return t;
}

inline bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Loads a .json or .csv trajectory. For CSV, `params` is attached as given.
inline Trajectory load_trajectory(const std::string& path, const Params& params) {
  std::ifstream in(path);
  if (!in) throw InputError("input", "cannot open " + path);
  if (has_suffix(path, ".json")) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("input", e.what());
    }
    return trajectory_from_json(j);
  }
  return read_csv(in, params);
}

inline void save_trajectory(const std::string& path, const Trajectory& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("out", "cannot write " + path);
  if (has_suffix(path, ".json")) {
    out << trajectory_to_json(t).dump() << '\n';
  } else {
    write_csv(out, t);
  }
  if (!out) throw InputError("out", "write failed for " + path);
}

}  // namespace chiral::cli
