#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chiral/brackets.hpp"
#include "chiral/core.hpp"
#include "chiral/hamiltonians.hpp"
#include "chiral/symmetry.hpp"

namespace chiral {

/// The four equivalent ways of writing the equations of motion.
enum class Formulation {
  CanonicalBracketDiracH,  ///< P_C with H^D on T*TM
  DiracBracketCanonicalH,  ///< P_D with H^C on T*TM
  DarbouxCanonicalH,       ///< canonical P_f with H_f on (x, y, q, p0, p)
  ReducedLiePoisson,       ///< osc* with H_red on (J_R, J_X, J_Y, l^2)
};

inline constexpr std::array<Formulation, 4> kAllFormulations = {
    Formulation::CanonicalBracketDiracH, Formulation::DiracBracketCanonicalH, Formulation::DarbouxCanonicalH,
    Formulation::ReducedLiePoisson};

inline std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::CanonicalBracketDiracH: return "canonical_dirac_h";
    case Formulation::DiracBracketCanonicalH: return "dirac_canonical_h";
    case Formulation::DarbouxCanonicalH: return "darboux";
    case Formulation::ReducedLiePoisson: return "reduced";
  }
  return "unknown";
}

inline std::optional<Formulation> parse_formulation(std::string_view name) {
  for (Formulation f : kAllFormulations) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

inline int state_dim(Formulation f) {
  switch (f) {
    case Formulation::CanonicalBracketDiracH:
    case Formulation::DiracBracketCanonicalH: return kFullDim;
    case Formulation::DarbouxCanonicalH: return kDarbouxDim;
    case Formulation::ReducedLiePoisson: return kReducedDim;
  }
  return 0;
}

inline std::vector<std::string> state_labels(Formulation f) {
  switch (f) {
    case Formulation::CanonicalBracketDiracH:
    case Formulation::DiracBracketCanonicalH: return label_list(kFullLabels);
    case Formulation::DarbouxCanonicalH: return label_list(kDarbouxLabels);
    case Formulation::ReducedLiePoisson: return label_list(kReducedLabels);
  }
  return {};
}

inline bool is_full_space(Formulation f) {
  return f == Formulation::CanonicalBracketDiracH || f == Formulation::DiracBracketCanonicalH;
}

/// Poisson structure and Hamiltonian of one formulation.
struct Binding {
  PoissonStructure poisson;
  ScalarField hamiltonian;
};

inline Binding binding(Formulation f, const Params& params) {
  switch (f) {
    case Formulation::CanonicalBracketDiracH: return {canonical_bracket(), h_dirac_field(params)};
    case Formulation::DiracBracketCanonicalH: return {dirac_bracket_closed_form(params), h_canonical_field(params)};
    case Formulation::DarbouxCanonicalH: return {final_bracket(params), h_final_field(params)};
    case Formulation::ReducedLiePoisson: return {osc_structure(params), h_reduced_field(params)};
  }
  throw Error(ErrorCode::InvalidParams, "unknown formulation");
}

/// Right-hand side P(state) grad H(state).
inline Vector rhs(Formulation f, const Vector& state, const Params& params) {
  require_dim(state.size(), state_dim(f), "rhs");
  const Binding b = binding(f, params);
  return hamiltonian_vector(b.poisson, b.hamiltonian, state);
}

/// Map a full-space or Darboux state to a point of T*TM (Darboux states land on phi = 0).
inline FullState to_full_state(Formulation f, const Vector& state, const Params& params) {
  if (is_full_space(f)) return unflatten(state);
  if (f == Formulation::DarbouxCanonicalH) return darboux_inverse(unflatten_darboux(state), params);
  throw Error(ErrorCode::DimensionMismatch, "reduced states have no full-space preimage");
}

enum class Method { RK4, ImplicitMidpoint };

inline std::string_view to_string(Method m) { return m == Method::RK4 ? "rk4" : "implicit_midpoint"; }

inline std::optional<Method> parse_method(std::string_view name) {
  if (name == "rk4") return Method::RK4;
  if (name == "implicit_midpoint" || name == "midpoint") return Method::ImplicitMidpoint;
  return std::nullopt;
}

/// Samples on a uniform time grid. `formulation` is empty for configuration
/// curves (x, y, xdot, ydot) produced by reconstruction.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::optional<Formulation> formulation;
  Params params{1.0, 1.0};
  std::vector<std::string> labels;
  std::vector<std::string> warnings;

  std::size_t size() const { return times.size(); }
  double step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

  /// Column `k` of the state samples.
  std::vector<double> column(int k) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const Vector& s : states) out.push_back(s[k]);
    return out;
  }
};

inline constexpr double kImplicitTol = 1e-13;
inline constexpr int kImplicitMaxIter = 50;

namespace detail {

inline std::vector<std::string> regularity_warnings(Formulation f, const Vector& y0, const Params& params) {
  std::vector<std::string> out;
  if (f == Formulation::ReducedLiePoisson) return out;
  const FullState z = to_full_state(f, y0, params);
  if (std::sqrt(norm_sq(z.p0)) < 1e-10) out.emplace_back("RegularityWarning: |p0| < 1e-10 at the initial state");
  if (std::abs(cross(z.vel, z.p1)) < 1e-10) {
    out.emplace_back("RegularityWarning: |xdot x p1| < 1e-10 at the initial state");
  }
  return out;
}

}  // namespace detail

/// Fixed-step integration of one formulation over [0, t_end].
///
/// The step count is round(t_end/dt) and the step is adjusted to t_end/n so
/// the grid ends on t_end. ImplicitMidpoint solves each step by fixed-point
/// iteration to kImplicitTol (scaled by max(1, |y|_inf)) within
/// kImplicitMaxIter iterations, otherwise NonConvergence.
inline Trajectory integrate(Formulation f, const Vector& y0, const Params& params, double dt, double t_end,
                            Method method = Method::RK4) {
  require_dim(y0.size(), state_dim(f), "integrate");
  if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end) {
    throw Error(ErrorCode::InvalidParams, "integrate needs 0 < dt <= t_end");
  }
  const Binding b = binding(f, params);
  auto field = [&b](const Vector& y) -> Vector { return b.poisson(y) * b.hamiltonian.gradient(y); };

  const auto n = std::max<long long>(1, std::llround(t_end / dt));
  const double h = t_end / static_cast<double>(n);

  Trajectory traj;
  traj.formulation = f;
  traj.params = params;
  traj.labels = state_labels(f);
  traj.warnings = detail::regularity_warnings(f, y0, params);
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(y0);

  Vector y = y0;
  for (long long i = 1; i <= n; ++i) {
    if (method == Method::RK4) {
      const Vector k1 = field(y);
      const Vector k2 = field(y + 0.5 * h * k1);
      const Vector k3 = field(y + 0.5 * h * k2);
      const Vector k4 = field(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      Vector next = y + h * field(y);
      bool converged = false;
      for (int it = 0; it < kImplicitMaxIter; ++it) {
        const Vector update = y + h * field(0.5 * (y + next));
        const double change = max_abs(update - next);
        next = update;
        if (!next.allFinite()) break;
        if (change <= kImplicitTol * std::max(1.0, max_abs(next))) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        throw Error(ErrorCode::NonConvergence,
                    "implicit midpoint fixed-point iteration failed at step " + std::to_string(i));
      }
      y = next;
    }
    if (!y.allFinite()) throw Error(ErrorCode::NonConvergence, "state became non-finite");
    traj.times.push_back(static_cast<double>(i) * h);
    traj.states.push_back(y);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Closed-form solutions

/// Closed-form reduced solution with amplitudes A, B on the level l^2 = lsq:
///   J_Y = A sin(wt) + B cos(wt), J_X = -B sin(wt) + A cos(wt) + l^2/m,
///   J_R = (B lambda/m) sin(wt) - (A lambda/m) cos(wt) - (lambda/(2 l^2))(A^2+B^2) - lambda l^2/(2 m^2),
/// with w = m/lambda.
inline ReducedState analytic_reduced(double t, double a, double b, double lsq, const Params& params) {
  if (!(lsq > 0.0)) throw Error(ErrorCode::ZeroMomentum, "analytic_reduced needs l^2 > 0");
  const double lam = params.lambda(), m = params.mass();
  const double w = params.frequency();
  const double s = std::sin(w * t), c = std::cos(w * t);
  ReducedState out;
  out.jy = a * s + b * c;
  out.jx = -b * s + a * c + lsq / m;
  out.jr = (b * lam / m) * s - (a * lam / m) * c - lam / (2.0 * lsq) * (a * a + b * b) - lam * lsq / (2.0 * m * m);
  out.lsq = lsq;
  return out;
}

struct ConfigurationPoint {
  Vec2 pos;
  Vec2 vel;
};

namespace detail {
struct ConfigurationCoefficients {
  double a0;
  double b0;
  double w;
};

inline ConfigurationCoefficients configuration_coefficients(double a, double b, Vec2 p0, const Params& params) {
  const double lsq = casimir_lsq(p0);
  if (!(lsq > 0.0)) throw Error(ErrorCode::ZeroMomentum, "analytic_configuration needs p0 != 0");
  const double scale = params.lambda() / (params.mass() * lsq);
  return {scale * (a * p0.x - b * p0.y), scale * (b * p0.x + a * p0.y), params.frequency()};
}
}  // namespace detail

/// Configuration curve x(t) = A0 sin(wt) + B0 cos(wt) + (p0x/m) t + C0x,
/// y(t) = B0 sin(wt) - A0 cos(wt) + (p0y/m) t + C0y, with
/// A0 = lambda (A p0x - B p0y)/(m l^2), B0 = lambda (B p0x + A p0y)/(m l^2).
/// The velocity is (1/l^2)(p0x J_X - p0y J_Y, p0y J_X + p0x J_Y) on the reduced solution.
inline ConfigurationPoint analytic_configuration(double t, double a, double b, Vec2 p0, Vec2 c0,
                                                 const Params& params) {
  const auto k = detail::configuration_coefficients(a, b, p0, params);
  const double m = params.mass();
  const double s = std::sin(k.w * t), c = std::cos(k.w * t);
  ConfigurationPoint out;
  out.pos = {k.a0 * s + k.b0 * c + p0.x / m * t + c0.x, k.b0 * s - k.a0 * c + p0.y / m * t + c0.y};
  const ReducedState j = analytic_reduced(t, a, b, casimir_lsq(p0), params);
  const double inv = 1.0 / j.lsq;
  out.vel = {inv * (p0.x * j.jx - p0.y * j.jy), inv * (p0.y * j.jx + p0.x * j.jy)};
  return out;
}

/// Third jet of the analytic configuration curve (exact derivatives).
inline Jet analytic_jet(double t, double a, double b, Vec2 p0, Vec2 c0, const Params& params) {
  const auto k = detail::configuration_coefficients(a, b, p0, params);
  const ConfigurationPoint pt = analytic_configuration(t, a, b, p0, c0, params);
  const double s = std::sin(k.w * t), c = std::cos(k.w * t);
  const double w2 = k.w * k.w, w3 = w2 * k.w;
  Jet jet;
  jet.pos = pt.pos;
  jet.vel = pt.vel;
  jet.acc = {w2 * (-k.a0 * s - k.b0 * c), w2 * (-k.b0 * s + k.a0 * c)};
  jet.jerk = {w3 * (-k.a0 * c + k.b0 * s), w3 * (-k.b0 * c - k.a0 * s)};
  return jet;
}

// ---------------------------------------------------------------------------
// Reduction and reconstruction

enum class Triple { Canonical, Dirac };

inline void require_regular_momentum(double lsq, const char* where) {
  if (!(lsq >= 1e-10)) throw Error(ErrorCode::ZeroMomentum, std::string(where) + ": |p0|^2 < 1e-10");
}

/// Apply invariants_canonical or invariants_dirac samplewise.
inline Trajectory project_full_to_reduced(const Trajectory& traj, Triple which, const Params& params) {
  if (!traj.formulation || traj.formulation == Formulation::ReducedLiePoisson) {
    throw Error(ErrorCode::DimensionMismatch, "project_full_to_reduced needs a full-space or Darboux trajectory");
  }
  Trajectory out;
  out.formulation = Formulation::ReducedLiePoisson;
  out.params = params;
  out.labels = state_labels(Formulation::ReducedLiePoisson);
  out.times = traj.times;
  out.states.reserve(traj.size());
  for (const Vector& s : traj.states) {
    const FullState z = to_full_state(*traj.formulation, s, params);
    require_regular_momentum(casimir_lsq(z.p0), "project_full_to_reduced");
    out.states.push_back(flatten(which == Triple::Canonical ? invariants_canonical(z, params)
                                                            : invariants_dirac(z, params)));
  }
  return out;
}

/// Velocity of the base curve from the reduced point and the conserved p0.
inline Vec2 reconstruct_velocity(const ReducedState& s, Vec2 p0) {
  const double inv = 1.0 / casimir_lsq(p0);
  return {inv * (p0.x * s.jx - p0.y * s.jy), inv * (p0.y * s.jx + p0.x * s.jy)};
}

/// Configuration curve (x, y, xdot, ydot) from a reduced trajectory: velocities
/// algebraically from (J_X, J_Y, p0), positions by the trapezoid rule from x0.
inline Trajectory reconstruct(const Trajectory& reduced, Vec2 p0, Vec2 x0) {
  if (reduced.formulation != Formulation::ReducedLiePoisson) {
    throw Error(ErrorCode::DimensionMismatch, "reconstruct needs a reduced trajectory");
  }
  const double lsq = casimir_lsq(p0);
  require_regular_momentum(lsq, "reconstruct");

  Trajectory out;
  out.params = reduced.params;
  out.labels = {"x", "y", "xdot", "ydot"};
  out.times = reduced.times;
  out.states.reserve(reduced.size());

  Vec2 pos = x0;
  Vec2 prev_vel{};
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const ReducedState s = unflatten_reduced(reduced.states[i]);
    if (std::abs(s.lsq - lsq) > 1e-10) {
      throw Error(ErrorCode::MomentumMismatch, "|p0|^2 differs from the reduced l^2 at sample " + std::to_string(i));
    }
    const Vec2 vel = reconstruct_velocity(s, p0);
    if (i > 0) pos = pos + 0.5 * (reduced.times[i] - reduced.times[i - 1]) * (vel + prev_vel);
    prev_vel = vel;
    Vector row(4);
    row << pos.x, pos.y, vel.x, vel.y;
    out.states.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conservation diagnostics

/// Max deviations from the initial values along a trajectory. Fields that do
/// not apply to the formulation stay at zero.
struct ConservationReport {
  double energy = 0.0;          ///< max |H(t) - H(0)| of the formulation's own Hamiltonian
  double angular = 0.0;         ///< max |mu(t) - mu(0)|
  double linear = 0.0;          ///< max |p0(t) - p0(0)|_inf
  double constraint = 0.0;      ///< max |phi(t)|_inf
  double lsq = 0.0;             ///< max |l^2(t) - l^2(0)|
  double cylinder = 0.0;        ///< max drift of the cylinder Casimir
  double paraboloid = 0.0;      ///< max |paraboloid residual(t)| (reduced only)
};

inline ConservationReport conservation(const Trajectory& traj) {
  ConservationReport r;
  if (!traj.formulation || traj.states.empty()) return r;
  const Formulation f = *traj.formulation;
  const Params& params = traj.params;
  const Binding b = binding(f, params);
  const Vector& first = traj.states.front();
  const double h0 = b.hamiltonian(first);
  if (f == Formulation::ReducedLiePoisson) {
    const ReducedState s0 = unflatten_reduced(first);
    const double c0 = casimir_cylinder(s0, params);
    for (const Vector& v : traj.states) {
      const ReducedState s = unflatten_reduced(v);
      r.energy = std::max(r.energy, std::abs(b.hamiltonian(v) - h0));
      r.lsq = std::max(r.lsq, std::abs(s.lsq - s0.lsq));
      r.cylinder = std::max(r.cylinder, std::abs(casimir_cylinder(s, params) - c0));
      r.paraboloid = std::max(r.paraboloid, std::abs(paraboloid_residual(s, params)));
    }
    return r;
  }
  const FullState z0 = to_full_state(f, first, params);
  const double mu0 = momentum_map_full(z0)[0];
  for (const Vector& v : traj.states) {
    const FullState z = to_full_state(f, v, params);
    r.energy = std::max(r.energy, std::abs(b.hamiltonian(v) - h0));
    r.angular = std::max(r.angular, std::abs(momentum_map_full(z)[0] - mu0));
    r.linear = std::max({r.linear, std::abs(z.p0.x - z0.p0.x), std::abs(z.p0.y - z0.p0.y)});
    const Vec2 phi = constraint_values(z, params);
    r.constraint = std::max({r.constraint, std::abs(phi.x), std::abs(phi.y)});
    r.lsq = std::max(r.lsq, std::abs(casimir_lsq(z.p0) - casimir_lsq(z0.p0)));
  }
  return r;
}

}  // namespace chiral
