#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chiral/cli/trajectory_io.hpp"
#include "chiral/dynamics.hpp"

namespace chiral::cli {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::string color = "#1f77b4";
};

struct Marker {
  std::string label;
  double x = 0.0;
  double y = 0.0;
  std::string color = "#d62728";
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
  std::vector<Marker> markers;
  std::optional<double> hline;  ///< dashed reference line, e.g. a tolerance
  std::string hline_label;
  bool equal_aspect = false;
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  void include(double v) {
    if (!std::isfinite(v)) return;
    if (empty) {
      lo = hi = v;
      empty = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (empty) {
      lo = -1.0;
      hi = 1.0;
      return;
    }
    const double span = hi - lo;
    const double margin = span > 1e-12 * std::max(1.0, std::abs(hi)) ? 0.05 * span : std::max(0.5, std::abs(hi) * 0.1);
    lo -= margin;
    hi += margin;
  }
  bool empty = true;
};

inline bool degenerate(const Series& s) {
  if (s.xs.empty()) return true;
  const auto [xmin, xmax] = std::minmax_element(s.xs.begin(), s.xs.end());
  const auto [ymin, ymax] = std::minmax_element(s.ys.begin(), s.ys.end());
  const double scale = std::max({1.0, std::abs(*xmax), std::abs(*ymax)});
  return *xmax - *xmin <= 1e-12 * scale && *ymax - *ymin <= 1e-12 * scale;
}

}  // namespace svg_detail

/// Static line plot: axes with end-point tick labels, one polyline per series.
/// A series that never moves is drawn as a single point marker.
inline std::string render_svg(const PlotSpec& spec) {
  using namespace svg_detail;
  constexpr double width = 640, height = 480, left = 80, right = 20, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  Range xr, yr;
  for (const Series& s : spec.series) {
    for (double x : s.xs) xr.include(x);
    for (double y : s.ys) yr.include(y);
  }
  for (const Marker& m : spec.markers) {
    xr.include(m.x);
    yr.include(m.y);
  }
  if (spec.hline) yr.include(*spec.hline);
  xr.pad();
  yr.pad();
  if (spec.equal_aspect) {
    const double per_px = std::max((xr.hi - xr.lo) / pw, (yr.hi - yr.lo) / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * per_px * pw;
    xr.hi = cx + 0.5 * per_px * pw;
    yr.lo = cy - 0.5 * per_px * ph;
    yr.hi = cy + 0.5 * per_px * ph;
  }
  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(spec.title)
     << "</text>\n";
  // axes box and end-point ticks
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"start\">" << num(xr.lo) << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"end\">" << num(xr.hi)
     << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + ph << "\" text-anchor=\"end\">" << num(yr.lo) << "</text>\n";
  os << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << num(yr.hi) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
     << escape(spec.xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << escape(spec.ylabel) << "</text>\n";

  if (spec.hline) {
    os << "<line class=\"reference\" x1=\"" << num(left) << "\" y1=\"" << num(py(*spec.hline)) << "\" x2=\""
       << num(left + pw) << "\" y2=\"" << num(py(*spec.hline))
       << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    if (!spec.hline_label.empty()) {
      os << "<text x=\"" << num(left + pw - 4) << "\" y=\"" << num(py(*spec.hline) - 4)
         << "\" text-anchor=\"end\" fill=\"#888\">" << escape(spec.hline_label) << "</text>\n";
    }
  }
  for (const Series& s : spec.series) {
    if (degenerate(s)) {
      if (s.xs.empty()) continue;
      os << "<circle class=\"point\" cx=\"" << num(px(s.xs.front())) << "\" cy=\"" << num(py(s.ys.front()))
         << "\" r=\"4\" fill=\"" << s.color << "\"><title>" << escape(s.label) << "</title></circle>\n";
      continue;
    }
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
      os << num(px(s.xs[i])) << ',' << num(py(s.ys[i])) << ' ';
    }
    os << "\"><title>" << escape(s.label) << "</title></polyline>\n";
  }
  for (const Marker& m : spec.markers) {
    os << "<circle class=\"marker\" cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y)) << "\" r=\"3\" fill=\""
       << m.color << "\"><title>" << escape(m.label) << "</title></circle>\n";
  }
  // legend
  double ly = top + 16;
  for (const Series& s : spec.series) {
    os << "<text x=\"" << num(left + 8) << "\" y=\"" << num(ly) << "\" fill=\"" << s.color << "\">"
       << escape(s.label) << "</text>\n";
    ly += 14;
  }
  os << "</svg>\n";
  return os.str();
}

enum class PlotKind { XyCurve, OrbitJxJy, ParaboloidResidual, InvariantDrift };

inline std::optional<PlotKind> parse_plot_kind(std::string_view s) {
  if (s == "xy_curve") return PlotKind::XyCurve;
  if (s == "orbit_JXJY") return PlotKind::OrbitJxJy;
  if (s == "paraboloid_residual") return PlotKind::ParaboloidResidual;
  if (s == "invariant_drift") return PlotKind::InvariantDrift;
  return std::nullopt;
}

namespace svg_detail {

inline int column_of(const Trajectory& t, const std::string& label) {
  const auto labels = trajectory_labels(t);
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InputError("input", "trajectory has no '" + label + "' column");
  return static_cast<int>(it - labels.begin());
}

inline Trajectory as_reduced(const Trajectory& t) {
  if (t.formulation == Formulation::ReducedLiePoisson) return t;
  if (!t.formulation) throw InputError("input", "configuration curves carry no invariants");
  return project_full_to_reduced(t, Triple::Dirac, t.params);
}

// Running maximum of |f(sample) - f(first)|, floored for the log axis.
template <typename F>
std::vector<double> log_drift(const Trajectory& t, F&& f) {
  std::vector<double> out;
  const double f0 = f(t.states.front());
  double worst = 0.0;
  for (const Vector& s : t.states) {
    worst = std::max(worst, std::abs(f(s) - f0));
    out.push_back(std::log10(std::max(worst, 1e-18)));
  }
  return out;
}

}  // namespace svg_detail

inline constexpr double kDriftTolerance = 1e-8;

/// Builds the requested plot from a trajectory (params are read from `t.params`).
inline PlotSpec make_plot(PlotKind kind, const Trajectory& t) {
  using namespace svg_detail;
  if (t.size() == 0) throw InputError("input", "empty trajectory");
  PlotSpec spec;
  switch (kind) {
    case PlotKind::XyCurve: {
      spec.title = "configuration-space curve";
      spec.xlabel = "x";
      spec.ylabel = "y";
      spec.equal_aspect = true;
      spec.series.push_back({"(x, y)", t.column(column_of(t, "x")), t.column(column_of(t, "y"))});
      spec.markers.push_back({"start", t.states.front()[column_of(t, "x")], t.states.front()[column_of(t, "y")]});
      break;
    }
    case PlotKind::OrbitJxJy: {
      const Trajectory r = as_reduced(t);
      spec.title = "reduced orbit in the (J_X, J_Y) plane";
      spec.xlabel = "J_X";
      spec.ylabel = "J_Y";
      spec.equal_aspect = true;
      spec.series.push_back({"(J_X, J_Y)", r.column(1), r.column(2)});
      spec.markers.push_back({"center (l^2/m, 0)", r.states.front()[3] / r.params.mass(), 0.0});
      break;
    }
    case PlotKind::ParaboloidResidual: {
      const Trajectory r = as_reduced(t);
      spec.title = "paraboloid residual J_X^2 + J_Y^2 + (2 l^2/lambda) J_R";
      spec.xlabel = "t";
      spec.ylabel = "residual";
      std::vector<double> res;
      for (const Vector& s : r.states) res.push_back(paraboloid_residual(unflatten_reduced(s), r.params));
      spec.series.push_back({"residual", r.times, res});
      break;
    }
    case PlotKind::InvariantDrift: {
      if (!t.formulation) throw InputError("input", "configuration curves carry no invariants");
      spec.title = "running max of invariant drift";
      spec.xlabel = "t";
      spec.ylabel = "log10 max |drift|";
      spec.hline = std::log10(kDriftTolerance);
      spec.hline_label = "tolerance 1e-8";
      const Formulation f = *t.formulation;
      const Binding b = binding(f, t.params);
      spec.series.push_back({"H", t.times, log_drift(t, [&](const Vector& v) { return b.hamiltonian(v); })});
      if (f == Formulation::ReducedLiePoisson) {
        spec.series.push_back({"cylinder", t.times,
                               log_drift(t,
                                         [&](const Vector& v) {
                                           return casimir_cylinder(unflatten_reduced(v), t.params);
                                         }),
                               "#2ca02c"});
      } else {
        spec.series.push_back({"mu", t.times,
                               log_drift(t,
                                         [&](const Vector& v) {
                                           return momentum_map_full(to_full_state(f, v, t.params))[0];
                                         }),
                               "#2ca02c"});
      }
      break;
    }
  }
  return spec;
}

}  // namespace chiral::cli
