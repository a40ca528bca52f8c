#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiral/dynamics.hpp"
#include "chiral/verify.hpp"

namespace chiral::cli {

inline nlohmann::json to_json(const CheckResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["suite"] = r.suite;
  j["passed"] = r.passed;
  j["expected_fail"] = r.expected_fail;
  j["ok"] = r.ok();
  // JSON has no infinity; errored checks report null.
  if (std::isfinite(r.residual)) {
    j["residual"] = r.residual;
  } else {
    j["residual"] = nullptr;
  }
  j["tolerance"] = r.tolerance;
  j["n_samples"] = r.n_samples;
  j["notes"] = r.notes;
  return j;
}

/// One JSON object per line, in the order given.
inline void write_jsonl(std::ostream& os, const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) os << to_json(r).dump() << '\n';
}

inline void write_summary(std::ostream& os, const std::vector<CheckResult>& results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-36s %-12s %-6s %11s %9s\n", "check", "suite", "status", "residual",
                "tolerance");
  os << line;
  int bad = 0, controls = 0;
  for (const CheckResult& r : results) {
    const char* status = r.ok() ? (r.expected_fail ? "XFAIL" : "PASS") : (r.expected_fail ? "XPASS" : "FAIL");
    if (!r.ok()) ++bad;
    if (r.expected_fail) ++controls;
    std::snprintf(line, sizeof line, "%-36s %-12s %-6s %11.3e %9.1e\n", r.name.c_str(), r.suite.c_str(), status,
                  r.residual, r.tolerance);
    os << line;
  }
  os << results.size() << " checks, " << controls << " expected-fail controls, " << bad << " unexpected\n";
}

/// Conservation summary printed after simulate.
inline void write_conservation(std::ostream& os, const Trajectory& t) {
  const ConservationReport r = conservation(t);
  char line[128];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-18s %.3e\n", name, v);
    os << line;
  };
  os << "conservation over " << t.size() << " samples:\n";
  row("max |dH|", r.energy);
  if (t.formulation == Formulation::ReducedLiePoisson) {
    row("max |dl^2|", r.lsq);
    row("max |dcylinder|", r.cylinder);
    row("max |paraboloid|", r.paraboloid);
  } else {
    row("max |dmu|", r.angular);
    row("max |dp0|", r.linear);
    row("max |phi|", r.constraint);
  }
}

}  // namespace chiral::cli
