#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chiral/brackets.hpp"
#include "chiral/core.hpp"
#include "chiral/dynamics.hpp"
#include "chiral/hamiltonians.hpp"
#include "chiral/sampling.hpp"
#include "chiral/symmetry.hpp"

namespace chiral {

enum class Suite { Algebra, Brackets, Hamiltonians, Dynamics, Reduction, All };

inline constexpr std::array<Suite, 6> kAllSuites = {Suite::Algebra,  Suite::Brackets,  Suite::Hamiltonians,
                                                    Suite::Dynamics, Suite::Reduction, Suite::All};

inline std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::Algebra: return "algebra";
    case Suite::Brackets: return "brackets";
    case Suite::Hamiltonians: return "hamiltonians";
    case Suite::Dynamics: return "dynamics";
    case Suite::Reduction: return "reduction";
    case Suite::All: return "all";
  }
  return "unknown";
}

inline std::optional<Suite> parse_suite(std::string_view name) {
  for (Suite s : kAllSuites) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

struct CheckResult {
  std::string name;
  std::string suite;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  int n_samples = 0;
  std::string notes;
  bool expected_fail = false;

  /// True when the outcome is the intended one (controls are meant to fail).
  bool ok() const { return expected_fail ? !passed : passed; }
};

inline bool all_ok(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.ok(); });
}

namespace verify_detail {

/// Trajectories shared by several dynamics and reduction checks, computed once.
struct StandardRuns {
  FullState z0;
  Trajectory canonical_dirac_h;
  Trajectory dirac_canonical_h;
  Trajectory darboux;
  Trajectory reduced;
};

inline constexpr double kStandardDt = 1e-3;
inline constexpr double kStandardTEnd = 10.0;

class Context {
 public:
  Context(std::uint64_t seed, Params params) : seed_(seed), params_(params) {}

  std::uint64_t seed() const { return seed_; }
  const Params& params() const { return params_; }

  const StandardRuns& standard() const {
    std::call_once(once_, [this] {
      Sampler rng(seed_, "standard_run");
      runs_.z0 = rng.surface_state(params_);
      const Vector y0 = flatten(runs_.z0);
      runs_.canonical_dirac_h =
          integrate(Formulation::CanonicalBracketDiracH, y0, params_, kStandardDt, kStandardTEnd);
      runs_.dirac_canonical_h =
          integrate(Formulation::DiracBracketCanonicalH, y0, params_, kStandardDt, kStandardTEnd);
      runs_.darboux = integrate(Formulation::DarbouxCanonicalH, flatten(darboux_forward(runs_.z0, params_)),
                                params_, kStandardDt, kStandardTEnd);
      runs_.reduced = integrate(Formulation::ReducedLiePoisson, flatten(invariants_dirac(runs_.z0, params_)),
                                params_, kStandardDt, kStandardTEnd);
    });
    return runs_;
  }

 private:
  std::uint64_t seed_;
  Params params_;
  mutable std::once_flag once_;
  mutable StandardRuns runs_;
};

struct Outcome {
  double residual = 0.0;
  double tolerance = 0.0;
  int n_samples = 0;
  std::string notes;
};

struct CheckSpec {
  std::string name;
  Suite suite;
  bool expected_fail = false;
  std::function<Outcome(Sampler&, const Context&)> run;
};

inline double vmax(const Vector& v) { return max_abs(v); }

// Max over samples of a residual function.
template <typename F>
double worst_of(int n, F&& f) {
  double w = 0.0;
  for (int i = 0; i < n; ++i) w = std::max(w, f());
  return w;
}

inline Outcome closure(Sampler& rng, const Context& ctx, bool dirac, int which) {
  const Params& params = ctx.params();
  const PoissonStructure p = dirac ? dirac_bracket_closed_form(params) : canonical_bracket();
  const auto j = dirac ? invariant_fields_dirac(params) : invariant_fields_canonical(params);
  constexpr int n = 1000;
  const double w = worst_of(n, [&] {
    const Vector z = flatten(rng.full_state());
    const auto s = dirac ? invariants_dirac(unflatten(z), params) : invariants_canonical(unflatten(z), params);
    switch (which) {
      case 0: return std::abs(bracket_of_functions(p, j[0], j[1], z) - s.jy);
      case 1: return std::abs(bracket_of_functions(p, j[0], j[2], z) + s.jx);
      default: return std::abs(bracket_of_functions(p, j[1], j[2], z) - s.lsq / params.lambda());
    }
  });
  return {w, 1e-9, n, dirac ? "Dirac bracket, Dirac triple" : "canonical bracket, canonical triple"};
}

inline Outcome se2_table(Sampler& rng, const Se2Fields& f) {
  constexpr int n = 50;
  const double w = worst_of(n, [&] {
    const Vector z = rng.vector(f.r.dim);
    return std::max({vmax(algebra_bracket(f.r, f.x, z) - f.y(z)), vmax(algebra_bracket(f.r, f.y, z) + f.x(z)),
                     vmax(algebra_bracket(f.x, f.y, z))});
  });
  return {w, 1e-9, n, "[R,X]=Y, [R,Y]=-X, [X,Y]=0 via negated field commutator"};
}

inline Outcome lift_relation(Sampler& rng, const Context& ctx, int which) {
  const OscLiftFields f = dirac_lift_fields(ctx.params());
  constexpr int n = 200;
  const double w = worst_of(n, [&] {
    const Vector z = flatten(rng.full_state());
    switch (which) {
      case 0: return vmax(lie_bracket(f.r, f.x, z) + f.y(z));
      case 1: return vmax(lie_bracket(f.r, f.y, z) - f.x(z));
      case 2: return vmax(lie_bracket(f.x, f.y, z) + f.center(z));
      default:
        return std::max({vmax(lie_bracket(f.center, f.r, z)), vmax(lie_bracket(f.center, f.x, z)),
                         vmax(lie_bracket(f.center, f.y, z))});
    }
  });
  return {w, 1e-9, n, "field commutator DG.F - DF.G"};
}

inline Outcome antisymmetry(Sampler& rng, const PoissonStructure& p) {
  constexpr int n = 1000;
  return {worst_of(n, [&] { return check_antisymmetry(p, rng.vector(p.dim)); }), 0.0, n, "max |P + P^T|"};
}

inline Outcome jacobi(Sampler& rng, const PoissonStructure& p, int n, double tol) {
  return {worst_of(n, [&] { return check_jacobi(p, rng.vector(p.dim)); }), tol, n, "cyclic sum over index triples"};
}

inline Vector printed_full_rhs(const FullState& z, const Params& params) {
  const double lam = params.lambda(), w = params.frequency();
  Vector out(kFullDim);
  out << -2.0 / lam * z.p1.y, 2.0 / lam * z.p1.x, -w * z.vel.y + z.p0.y / lam, w * z.vel.x - z.p0.x / lam, 0.0, 0.0,
      -w * z.p1.y - 0.5 * z.p0.x, w * z.p1.x - z.p0.y / lam;
  return out;
}

inline double position_gap(const Trajectory& a, const Trajectory& b, const Params& params) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const FullState za = to_full_state(*a.formulation, a.states[i], params);
    const FullState zb = to_full_state(*b.formulation, b.states[i], params);
    gap = std::max({gap, std::abs(za.pos.x - zb.pos.x), std::abs(za.pos.y - zb.pos.y)});
  }
  return gap;
}

inline double reduced_error(double a, double b, double lsq, const Params& params, double dt) {
  const Trajectory t =
      integrate(Formulation::ReducedLiePoisson, flatten(analytic_reduced(0, a, b, lsq, params)), params, dt, 10.0);
  double err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    err = std::max(err, vmax(t.states[i] - flatten(analytic_reduced(t.times[i], a, b, lsq, params))));
  }
  return err;
}

// Amplitudes and momentum for closed-form comparisons.
struct OracleData {
  double a;
  double b;
  Vec2 p0;
};

inline OracleData oracle_data(Sampler& rng) {
  OracleData d{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), {}};
  // Keep |p0| away from the reconstruction singularity.
  for (;;) {
    d.p0 = rng.vec2();
    if (norm_sq(d.p0) >= 0.25) return d;
  }
}

inline std::vector<CheckSpec> registry() {
  std::vector<CheckSpec> r;
  auto add = [&r](std::string name, Suite suite, std::function<Outcome(Sampler&, const Context&)> f,
                  bool expected_fail = false) { r.push_back({std::move(name), suite, expected_fail, std::move(f)}); };

  // ------------------------------------------------------------------ algebra
  const char* rel[] = {"JR_JX", "JR_JY", "JX_JY"};
  for (int k = 0; k < 3; ++k) {
    add(std::string("closure_canonical_") + rel[k], Suite::Algebra,
        [k](Sampler& g, const Context& c) { return closure(g, c, false, k); });
    add(std::string("closure_dirac_") + rel[k], Suite::Algebra,
        [k](Sampler& g, const Context& c) { return closure(g, c, true, k); });
  }
  const char* lifts[] = {"osc_lift_FR_FX", "osc_lift_FR_FY", "osc_lift_FX_FY", "osc_lift_center_central"};
  for (int k = 0; k < 4; ++k) {
    add(lifts[k], Suite::Algebra, [k](Sampler& g, const Context& c) { return lift_relation(g, c, k); });
  }
  add("se2_fields_plane", Suite::Algebra, [](Sampler& g, const Context&) { return se2_table(g, generators_plane()); });
  add("se2_fields_tangent_lift", Suite::Algebra, [](Sampler& g, const Context&) { return se2_table(g, tangent_lifts()); });
  add("se2_fields_cotangent_lift", Suite::Algebra,
      [](Sampler& g, const Context&) { return se2_table(g, cotangent_lifts()); });
  add("momentum_map_cotangent_plane", Suite::Algebra, [](Sampler& g, const Context&) {
    const PoissonStructure tm = cotangent_plane_bracket();
    const auto j = momentum_map_cotangent_plane_fields();
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const Vector v = g.vector(4);
      const auto mp = momentum_map_cotangent_plane({v[0], v[1]}, {v[2], v[3]});
      const Matrix want = se2_lie_poisson(Eigen::Vector3d(mp[0], mp[1], mp[2]));
      double e = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) e = std::max(e, std::abs(bracket_of_functions(tm, j[a], j[b], v) - want(a, b)));
      return e;
    });
    return Outcome{w, 1e-12, n, "T*M with dp0^dx, brackets of (mu, p0x, p0y)"};
  });
  add("momentum_map_full_space", Suite::Algebra, [](Sampler& g, const Context&) {
    const PoissonStructure pc = canonical_bracket();
    const auto j = momentum_map_full_fields();
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const FullState z = g.full_state();
      const auto mp = momentum_map_full(z);
      const Matrix want = -se2_lie_poisson(Eigen::Vector3d(mp[0], mp[1], mp[2]));
      double e = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          e = std::max(e, std::abs(bracket_of_functions(pc, j[a], j[b], flatten(z)) - want(a, b)));
      return e;
    });
    return Outcome{w, 1e-12, n, "P_C reproduces the se(2)* table up to overall sign"};
  });
  add("cocycle_plane_values", Suite::Algebra, [](Sampler& g, const Context&) {
    constexpr int n = 50;
    const double w = worst_of(n, [&] {
      const Vec2 p = g.vec2();
      return std::max({std::abs(cocycle_plane(kX, kY, p) - 1.0), std::abs(cocycle_plane(kY, kR, p)),
                       std::abs(cocycle_plane(kR, kX, p))});
    });
    return Outcome{w, 1e-12, n, "Theta(X,Y)=1, Theta(Y,R)=Theta(R,X)=0"};
  });
  add("cocycle_identity", Suite::Algebra, [](Sampler& g, const Context&) {
    constexpr int n = 50;
    const double w = worst_of(n, [&] {
      const Vec2 p = g.vec2();
      return std::abs(cocycle_plane(field_commutator(kX, kY), kR, p) + cocycle_plane(field_commutator(kY, kR), kX, p) +
                      cocycle_plane(field_commutator(kR, kX), kY, p));
    });
    return Outcome{w, 1e-12, n, "cyclic sum of Theta"};
  });
  add("equivariance_invariants", Suite::Algebra, [](Sampler& g, const Context& c) {
    const Se2Fields f = cotangent_lifts();
    std::vector<ScalarField> js;
    for (const auto& j : invariant_fields_canonical(c.params())) js.push_back(j);
    for (const auto& j : invariant_fields_dirac(c.params())) js.push_back(j);
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const Vector z = flatten(g.full_state());
      double e = 0.0;
      for (const ScalarField& j : js)
        for (const VectorField* v : {&f.r, &f.x, &f.y}) e = std::max(e, std::abs(j.gradient(z).dot((*v)(z))));
      return e;
    });
    return Outcome{w, 1e-12, n, "dJ.F for both triples and l^2 along cotangent lifts"};
  });
  add("mu_rotation_invariant", Suite::Algebra, [](Sampler& g, const Context&) {
    const Se2Fields f = cotangent_lifts();
    const ScalarField mu = momentum_map_full_fields()[0];
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const Vector z = flatten(g.full_state());
      return std::abs(mu.gradient(z).dot(f.r(z)));
    });
    return Outcome{w, 1e-12, n, "mu is rotation invariant (not translation invariant)"};
  });
  add("lagrangian_se2_invariant", Suite::Algebra, [](Sampler& g, const Context& c) {
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const GroupElement el{g.uniform(-std::numbers::pi, std::numbers::pi), g.vec2()};
      const Jet jet{g.vec2(), g.vec2(), g.vec2(), g.vec2()};
      const Jet moved = act_on_jet(el, jet);
      return std::abs(lagrangian(moved.vel, moved.acc, c.params()) - lagrangian(jet.vel, jet.acc, c.params()));
    });
    return Outcome{w, 1e-12, n, ""};
  });

  // ----------------------------------------------------------------- brackets
  add("core_cross_antisymmetry", Suite::Brackets, [](Sampler& g, const Context&) {
    constexpr int n = 100;
    const double w = worst_of(n, [&] {
      const Vec2 a = g.vec2(), b = g.vec2();
      return std::abs(cross(a, b) + cross(b, a));
    });
    return Outcome{w, 0.0, n, "exact"};
  });
  add("core_flatten_roundtrip", Suite::Brackets, [](Sampler& g, const Context&) {
    constexpr int n = 100;
    const double w = worst_of(n, [&] {
      const FullState z = g.full_state();
      return unflatten(flatten(z)) == z ? 0.0 : 1.0;
    });
    return Outcome{w, 0.0, n, "exact"};
  });
  auto structures = [](const Params& p) {
    return std::vector<std::pair<std::string, PoissonStructure>>{{"canonical", canonical_bracket()},
                                                                 {"dirac", dirac_bracket_closed_form(p)},
                                                                 {"final", final_bracket(p)},
                                                                 {"se2", se2_structure()},
                                                                 {"osc", osc_structure(p)}};
  };
  for (int k = 0; k < 5; ++k) {
    const std::string tag = structures(Params(1, 1))[k].first;
    add("antisymmetry_" + tag, Suite::Brackets,
        [k, structures](Sampler& g, const Context& c) { return antisymmetry(g, structures(c.params())[k].second); });
    add("jacobi_" + tag, Suite::Brackets, [k, structures](Sampler& g, const Context& c) {
      return jacobi(g, structures(c.params())[k].second, 1000, 1e-9);
    });
  }
  add("jacobi_dirac_constructed", Suite::Brackets, [](Sampler& g, const Context& c) {
    Outcome o = jacobi(g, dirac_bracket_constructed(c.params()), 50, 1e-6);
    o.notes = "constructor with finite-difference derivatives";
    return o;
  });
  add(
      "jacobi_negative_control", Suite::Brackets,
      [](Sampler& g, const Context& c) {
        Outcome o = jacobi(g, corrupted_osc_structure(c.params()), 200, 1e-9);
        o.notes = "{J_R,J_X} replaced by J_X*J_Y; must fail";
        return o;
      },
      true);
  add("dirac_table_entries", Suite::Brackets, [](Sampler& g, const Context&) {
    double w = 0.0;
    int n = 0;
    for (double lam : {0.5, 1.0, 2.0, -1.0}) {
      const Params p(lam, 1.0);
      const Matrix built = dirac_bracket_constructed(p)(flatten(g.full_state()));
      w = std::max({w, (built - dirac_bracket_closed_form(p)(Vector::Zero(kFullDim))).cwiseAbs().maxCoeff(),
                    std::abs(built(idx::xdot, idx::ydot) - 1.0 / lam), std::abs(built(idx::xdot, idx::p1x) - 0.5),
                    std::abs(built(idx::p1x, idx::p1y) - lam / 4.0)});
      ++n;
    }
    return Outcome{w, 1e-12, n, "lambda in {0.5, 1, 2, -1}"};
  });
  add("dirac_constructor_vs_closed_form", Suite::Brackets, [](Sampler& g, const Context&) {
    constexpr int n = 20;
    const double w = worst_of(n, [&] {
      const double mag = g.uniform(0.2, 3.0);
      const Params p(g.uniform(0, 1) < 0.5 ? -mag : mag, 1.0);
      const Vector z = flatten(g.full_state());
      return (dirac_bracket_constructed(p)(z) - dirac_bracket_closed_form(p)(z)).cwiseAbs().maxCoeff();
    });
    return Outcome{w, 1e-12, n, "random lambda of both signs"};
  });
  add("dirac_constraints_casimir", Suite::Brackets, [](Sampler& g, const Context& c) {
    const PoissonStructure pd = dirac_bracket_closed_form(c.params());
    const ConstraintSet cs = chiral_constraints(c.params());
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const Vector z = flatten(g.full_state());
      return std::max(check_casimir(pd, cs.constraints[0], z), check_casimir(pd, cs.constraints[1], z));
    });
    return Outcome{w, 1e-12, n, "P_D grad phi = 0"};
  });
  add("lsq_casimir_se2", Suite::Brackets, [](Sampler& g, const Context&) {
    const PoissonStructure p = se2_structure();
    constexpr int n = 1000;
    return Outcome{worst_of(n, [&] { return check_casimir(p, lsq_field_se2(), g.vector(3)); }), 1e-12, n, ""};
  });
  add("lsq_casimir_osc", Suite::Brackets, [](Sampler& g, const Context& c) {
    const PoissonStructure p = osc_structure(c.params());
    constexpr int n = 1000;
    return Outcome{worst_of(n, [&] { return check_casimir(p, lsq_field_reduced(), flatten(g.reduced_state())); }),
                   1e-12, n, ""};
  });
  add("darboux_congruence", Suite::Brackets, [](Sampler& g, const Context& c) {
    const Params& p = c.params();
    const Matrix jac = darboux_jacobian(p);
    Matrix want = Matrix::Zero(kFullDim, kFullDim);
    want.topLeftCorner(kDarbouxDim, kDarbouxDim) = final_bracket(p)(Vector::Zero(kDarbouxDim));
    const Matrix got = jac * dirac_bracket_closed_form(p)(flatten(g.full_state())) * jac.transpose();
    return Outcome{(got - want).cwiseAbs().maxCoeff(), 1e-12, 1, "J P_D J^T = canonical(6) + 0"};
  });
  add("final_bracket_velocity_chart", Suite::Brackets, [](Sampler&, const Context& c) {
    const Params& p = c.params();
    const Matrix pd = dirac_bracket_closed_form(p)(Vector::Zero(kFullDim));
    const std::array<int, 6> rows = {idx::x, idx::y, idx::xdot, idx::p0x, idx::p0y, idx::ydot};
    const Matrix pf = final_bracket(p, FinalChart::Velocity)(Vector::Zero(kDarbouxDim));
    double w = 0.0;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) w = std::max(w, std::abs(pf(a, b) - pd(rows[a], rows[b])));
    return Outcome{w, 1e-15, 1, "restriction of P_D to (x, y, xdot, p0x, p0y, ydot)"};
  });

  // ------------------------------------------------------------- hamiltonians
  add("gradients_match_fd", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    const Params& p = c.params();
    std::vector<ScalarField> fs = {h_canonical_field(p), h_dirac_field(p), lsq_field_full(), h_reduced_field(p),
                                   cylinder_field(p), lsq_field_reduced(), lsq_field_se2()};
    if (p.lambda() > 0) fs.push_back(h_final_field(p));
    for (const auto& f : invariant_fields_canonical(p)) fs.push_back(f);
    for (const auto& f : invariant_fields_dirac(p)) fs.push_back(f);
    for (const auto& f : momentum_map_full_fields()) fs.push_back(f);
    for (const auto& f : chiral_constraints(p).constraints) fs.push_back(f);
    double w = 0.0;
    int n = 0;
    for (const ScalarField& f : fs) {
      for (int i = 0; i < 100; ++i, ++n) {
        const Vector z = g.vector(f.dim);
        const Vector an = f.gradient(z);
        w = std::max(w, vmax(an - fd_gradient(f.value_fn, z)) / std::max(1.0, vmax(an)));
      }
    }
    return Outcome{w, 1e-6, n, "relative to max(1, |grad|)"};
  });
  add("hd_equals_hc_on_surface", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              const FullState z = g.surface_state(c.params());
                              return std::abs(h_dirac(z, c.params()) - h_canonical(z, c.params()));
                            }),
                   1e-12, n, ""};
  });
  add("hf_darboux_equals_hc", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              const FullState z = g.surface_state(c.params());
                              return std::abs(h_final(darboux_forward(z, c.params()), c.params()) -
                                              h_canonical(z, c.params()));
                            }),
                   1e-12, n, ""};
  });
  add("hred_canonical_triple_equals_hd", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              const FullState z = g.full_state();
                              return std::abs(h_reduced_dirac(invariants_canonical(z, c.params()), c.params()) -
                                              h_dirac(z, c.params()));
                            }),
                   1e-12, n, "pointwise on T*TM"};
  });
  add("hred_dirac_triple_equals_hc", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              const FullState z = g.full_state();
                              return std::abs(h_reduced_canonical(invariants_dirac(z, c.params()), c.params()) -
                                              h_canonical(z, c.params()));
                            }),
                   1e-12, n, "pointwise on T*TM"};
  });
  add("cylinder_commutes_hred_block", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              const ReducedState s = g.reduced_state();
                              Vector v(3);
                              v << s.jr, s.jx, s.jy;
                              return std::abs(bracket_of_functions(osc_block_structure(s.lsq, c.params()),
                                                                   cylinder_field_block(s.lsq, c.params()),
                                                                   h_reduced_field_block(c.params()), v));
                            }),
                   1e-12, n, "3x3 block on fixed l^2"};
  });
  add("paraboloid_identity", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 1000;
    return Outcome{worst_of(n,
                            [&] {
                              return std::abs(paraboloid_residual(invariants_dirac(g.full_state(), c.params()),
                                                                  c.params()));
                            }),
                   1e-12, n, "J_X^2 + J_Y^2 + (2 l^2/lambda) J_R on the Dirac triple"};
  });
  add("el_residual_analytic_curve", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 20;
    const double w = worst_of(n, [&] {
      const Vec2 r = el_residual(
          analytic_jet(g.uniform(0, 10), g.coordinate(), g.coordinate(), g.momentum(), g.vec2(), c.params()),
          c.params());
      return std::max(std::abs(r.x), std::abs(r.y));
    });
    return Outcome{w, 1e-10, n, "exact third jet of the closed-form curve"};
  });
  add("h_orbit_restriction", Suite::Hamiltonians, [](Sampler& g, const Context& c) {
    constexpr int n = 200;
    return Outcome{worst_of(n,
                            [&] {
                              const ReducedState s = invariants_dirac(g.full_state(), c.params());
                              return std::abs(h_orbit(s.jx, s.jy, s.lsq, c.params()) -
                                              h_reduced_canonical(s, c.params()));
                            }),
                   1e-12, n, "H_red restricted to the paraboloid"};
  });

  // ----------------------------------------------------------------- dynamics
  add("rhs_reduced_lie_poisson", Suite::Dynamics, [](Sampler& g, const Context& c) {
    const Params& p = c.params();
    constexpr int n = 200;
    return Outcome{worst_of(n,
                            [&] {
                              const ReducedState s = g.reduced_state();
                              Vector want(4);
                              want << s.jy, -p.frequency() * s.jy, p.frequency() * s.jx - s.lsq / p.lambda(), 0.0;
                              return vmax(rhs(Formulation::ReducedLiePoisson, flatten(s), p) - want);
                            }),
                   1e-12, n, ""};
  });
  add("rhs_reduced_fixed_point", Suite::Dynamics, [](Sampler& g, const Context&) {
    const ReducedState s{g.coordinate(), 1, 0, 1};
    return Outcome{vmax(rhs(Formulation::ReducedLiePoisson, flatten(s), Params(1, 1))), 0.0, 1, "m=lambda=1"};
  });
  add("rhs_printed_hamilton_equations", Suite::Dynamics, [](Sampler& g, const Context& c) {
    constexpr int n = 200;
    const double w = worst_of(n, [&] {
      const FullState z = g.surface_state(c.params());
      const Vector d = rhs(Formulation::CanonicalBracketDiracH, flatten(z), c.params()) - printed_full_rhs(z, c.params());
      return vmax(d.head(7));
    });
    return Outcome{w, 1e-12, n, "on phi=0, all components but p1y (see printed_p1y_coefficient)"};
  });
  add(
      "printed_p1y_coefficient", Suite::Dynamics,
      [](Sampler& g, const Context& c) {
        // Evaluated at lambda = 1; the printed and derived forms agree only at lambda = 2.
        const Params p(1.0, c.params().mass());
        constexpr int n = 200;
        const double w = worst_of(n, [&] {
          const FullState z = g.surface_state(p);
          return std::abs(rhs(Formulation::CanonicalBracketDiracH, flatten(z), p)[idx::p1y] -
                          printed_full_rhs(z, p)[idx::p1y]);
        });
        return Outcome{w, 1e-12, n, "printed -(1/lambda)p0y vs derived -(1/2)p0y; must fail"};
      },
      true);
  add("rhs_p0_components_zero", Suite::Dynamics, [](Sampler& g, const Context& c) {
    constexpr int n = 200;
    return Outcome{worst_of(n,
                            [&] {
                              const Vector z = flatten(g.full_state());
                              double e = 0.0;
                              for (Formulation f :
                                   {Formulation::CanonicalBracketDiracH, Formulation::DiracBracketCanonicalH}) {
                                const Vector r = rhs(f, z, c.params());
                                e = std::max({e, std::abs(r[idx::p0x]), std::abs(r[idx::p0y])});
                              }
                              return e;
                            }),
                   0.0, n, "exact"};
  });

  auto full_runs = [](const StandardRuns& s) {
    return std::array<const Trajectory*, 3>{&s.canonical_dirac_h, &s.dirac_canonical_h, &s.darboux};
  };
  auto conservation_check = [full_runs](double ConservationReport::*field, double tol, const char* what) {
    return [=](Sampler&, const Context& c) {
      const StandardRuns& s = c.standard();
      double w = 0.0;
      for (const Trajectory* t : full_runs(s)) w = std::max(w, conservation(*t).*field);
      return Outcome{w, tol, 3, std::string(what) + "; RK4 dt=1e-3 on [0,10], three full formulations"};
    };
  };
  add("conservation_energy", Suite::Dynamics, conservation_check(&ConservationReport::energy, 1e-8, "max |dH|"));
  add("conservation_angular", Suite::Dynamics, conservation_check(&ConservationReport::angular, 1e-8, "max |dmu|"));
  add("conservation_linear", Suite::Dynamics, conservation_check(&ConservationReport::linear, 1e-13, "max |dp0|"));
  add("conservation_lsq", Suite::Dynamics, conservation_check(&ConservationReport::lsq, 1e-13, "max |dl^2|"));
  add("conservation_constraint", Suite::Dynamics,
      conservation_check(&ConservationReport::constraint, 1e-8, "max |phi|"));
  add("reduced_energy", Suite::Dynamics, [](Sampler&, const Context& c) {
    return Outcome{conservation(c.standard().reduced).energy, 1e-8, 1, "H_red along the reduced run"};
  });
  add("reduced_paraboloid", Suite::Dynamics, [](Sampler&, const Context& c) {
    return Outcome{conservation(c.standard().reduced).paraboloid, 1e-8, 1, "max paraboloid residual"};
  });
  add("reduced_cylinder", Suite::Dynamics, [](Sampler&, const Context& c) {
    return Outcome{conservation(c.standard().reduced).cylinder, 1e-8, 1, "max cylinder Casimir drift"};
  });
  add("formulation_equivalence", Suite::Dynamics, [](Sampler&, const Context& c) {
    const StandardRuns& s = c.standard();
    const double w = std::max(position_gap(s.canonical_dirac_h, s.dirac_canonical_h, c.params()),
                              position_gap(s.canonical_dirac_h, s.darboux, c.params()));
    return Outcome{w, 1e-6, 3, "max position gap over [0,10]"};
  });
  add("rk4_order", Suite::Dynamics, [](Sampler& g, const Context& c) {
    const double a = g.uniform(-1, 1), b = g.uniform(-1, 1), lsq = norm_sq(g.momentum()) + 0.25;
    const std::array<double, 3> dts = {2e-2, 1e-2, 5e-3};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double dt : dts) {
      const double x = std::log(dt), y = std::log(reduced_error(a, b, lsq, c.params(), dt));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    return Outcome{std::abs(slope - 4.0), 0.2, 3, "|slope - 4| of log max error vs log dt against the closed form"};
  });
  add("rk4_halving_ratio", Suite::Dynamics, [](Sampler& g, const Context& c) {
    const double a = g.uniform(-1, 1), b = g.uniform(-1, 1), lsq = norm_sq(g.momentum()) + 0.25;
    const double ratio = reduced_error(a, b, lsq, c.params(), 1e-2) / reduced_error(a, b, lsq, c.params(), 5e-3);
    return Outcome{std::abs(ratio / 16.0 - 1.0), 0.2, 2, "error ratio dt=1e-2 over dt=5e-3, relative to 16"};
  });
  add("fixed_point_constant", Suite::Dynamics, [](Sampler& g, const Context&) {
    const Params p(1, 1);
    const Vector y0 = flatten(ReducedState{g.coordinate(), 1, 0, 1});
    const Trajectory t = integrate(Formulation::ReducedLiePoisson, y0, p, 1e-2, 10.0);
    double w = 0.0;
    for (const Vector& s : t.states) w = std::max(w, vmax(s - y0));
    return Outcome{w, 0.0, static_cast<int>(t.size()), "J_Y=0, J_X=l^2/m"};
  });
  add("implicit_midpoint_cylinder", Suite::Dynamics, [](Sampler& g, const Context& c) {
    const Trajectory t = integrate(Formulation::ReducedLiePoisson, flatten(g.reduced_state()), c.params(), 5e-2,
                                   10.0, Method::ImplicitMidpoint);
    const ConservationReport r = conservation(t);
    return Outcome{std::max(r.cylinder, r.energy), 1e-10, static_cast<int>(t.size()),
                   "quadratic invariants under implicit midpoint, dt=5e-2"};
  });
  add("helix_circle", Suite::Dynamics, [](Sampler&, const Context& c) {
    const Trajectory& t = c.standard().reduced;
    std::vector<double> radii;
    for (const Vector& s : t.states) radii.push_back(std::hypot(s[1] - s[3] / c.params().mass(), s[2]));
    double mean = 0.0, var = 0.0;
    for (double r : radii) mean += r;
    mean /= static_cast<double>(radii.size());
    for (double r : radii) var += (r - mean) * (r - mean);
    const double rel = mean > 0 ? std::sqrt(var / static_cast<double>(radii.size())) / mean : 0.0;
    return Outcome{rel, 1e-6, static_cast<int>(radii.size()), "radius stddev/mean around (l^2/m, 0)"};
  });

  // C drift over one period at m = 2, starting from A=1, B=0, l^2=1.
  auto m2_drift = [](const Context& c, bool printed) {
    const Params p(c.params().lambda(), 2.0);
    const double period = 2.0 * std::numbers::pi / std::abs(p.frequency());
    const ReducedState s0 = analytic_reduced(0, 1, 0, 1, p);
    const Trajectory t = integrate(Formulation::ReducedLiePoisson, flatten(s0), p, 1e-3, period);
    auto value = [&](const Vector& v) {
      return printed ? printed_casimir_c(unflatten_reduced(v), p) : casimir_cylinder(unflatten_reduced(v), p);
    };
    double w = 0.0;
    for (const Vector& v : t.states) w = std::max(w, std::abs(value(v) - value(t.states.front())));
    return Outcome{w, printed ? 1e-3 : 1e-8, static_cast<int>(t.size()), ""};
  };
  add("cylinder_m2_conserved", Suite::Dynamics, [m2_drift](Sampler&, const Context& c) {
    Outcome o = m2_drift(c, false);
    o.notes = "(J_X - l^2/m)^2 + J_Y^2 at m=2 over one period";
    return o;
  });
  add(
      "paper_C_m2_nonconserved", Suite::Dynamics,
      [m2_drift](Sampler&, const Context& c) {
        Outcome o = m2_drift(c, true);
        o.notes = "printed C = J_X^2 - 2 m l^2 J_X + J_Y^2 at m=2 over one period; must fail";
        return o;
      },
      true);

  // ---------------------------------------------------------------- reduction
  auto commutes = [](Triple which) {
    return [which](Sampler&, const Context& c) {
      const StandardRuns& s = c.standard();
      const Trajectory projected = project_full_to_reduced(s.canonical_dirac_h, which, c.params());
      const Trajectory reduced = integrate(Formulation::ReducedLiePoisson, projected.states.front(), c.params(),
                                           kStandardDt, kStandardTEnd);
      double w = 0.0;
      for (std::size_t i = 0; i < projected.size(); ++i) {
        w = std::max(w, vmax(projected.states[i] - reduced.states[i]));
      }
      return Outcome{w, 1e-6, static_cast<int>(projected.size()), "projected full run vs reduced run"};
    };
  };
  add("reduction_commutes_canonical", Suite::Reduction, commutes(Triple::Canonical));
  add("reduction_commutes_dirac", Suite::Reduction, commutes(Triple::Dirac));
  add("projection_lsq_constant", Suite::Reduction, [](Sampler&, const Context& c) {
    const Trajectory t = project_full_to_reduced(c.standard().dirac_canonical_h, Triple::Dirac, c.params());
    double w = 0.0;
    for (const Vector& s : t.states) w = std::max(w, std::abs(s[3] - t.states.front()[3]));
    return Outcome{w, 1e-12, static_cast<int>(t.size()), ""};
  });
  add("triples_coincide_on_surface", Suite::Reduction, [](Sampler&, const Context& c) {
    const Trajectory& full = c.standard().dirac_canonical_h;
    const Trajectory a = project_full_to_reduced(full, Triple::Canonical, c.params());
    const Trajectory b = project_full_to_reduced(full, Triple::Dirac, c.params());
    double w = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, vmax(a.states[i] - b.states[i]));
    return Outcome{w, 1e-8, static_cast<int>(a.size()), "canonical vs Dirac triple along a surface trajectory"};
  });
  add("analytic_reduced_ode", Suite::Reduction, [](Sampler& g, const Context& c) {
    constexpr int n = 50;
    const double w = worst_of(n, [&] {
      const double a = g.coordinate(), b = g.coordinate(), lsq = norm_sq(g.momentum()), t = g.uniform(0, 10);
      const double h = 1e-5;
      const Vector fd = (flatten(analytic_reduced(t + h, a, b, lsq, c.params())) -
                         flatten(analytic_reduced(t - h, a, b, lsq, c.params()))) /
                        (2 * h);
      return vmax(fd - rhs(Formulation::ReducedLiePoisson, flatten(analytic_reduced(t, a, b, lsq, c.params())),
                           c.params()));
    });
    return Outcome{w, 1e-8, n, "central difference of the closed form vs the ODE"};
  });
  add("analytic_dirac_invariants", Suite::Reduction, [](Sampler& g, const Context& c) {
    constexpr int n = 50;
    const double w = worst_of(n, [&] {
      const double a = g.coordinate(), b = g.coordinate(), t = g.uniform(0, 10);
      const Vec2 p0 = g.momentum();
      const ConfigurationPoint pt = analytic_configuration(t, a, b, p0, {}, c.params());
      return vmax(flatten(invariants_dirac(on_surface(pt.pos, pt.vel, p0, c.params()), c.params())) -
                  flatten(analytic_reduced(t, a, b, casimir_lsq(p0), c.params())));
    });
    return Outcome{w, 1e-10, n, "invariants_dirac along the closed-form curve"};
  });
  auto reconstruction = [](Sampler& g, const Context& c, OracleData& d) {
    d = oracle_data(g);
    const Trajectory reduced =
        integrate(Formulation::ReducedLiePoisson, flatten(analytic_reduced(0, d.a, d.b, casimir_lsq(d.p0), c.params())),
                  c.params(), kStandardDt, kStandardTEnd);
    return reconstruct(reduced, d.p0, analytic_configuration(0, d.a, d.b, d.p0, {}, c.params()).pos);
  };
  add("reconstruct_vs_analytic", Suite::Reduction, [reconstruction](Sampler& g, const Context& c) {
    OracleData d{};
    const Trajectory curve = reconstruction(g, c, d);
    double w = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const Vec2 want = analytic_configuration(curve.times[i], d.a, d.b, d.p0, {}, c.params()).pos;
      w = std::max({w, std::abs(curve.states[i][0] - want.x), std::abs(curve.states[i][1] - want.y)});
    }
    return Outcome{w, 1e-6, static_cast<int>(curve.size()), "trapezoid positions vs closed form, dt=1e-3"};
  });
  add("reconstruct_el_residual", Suite::Reduction, [reconstruction](Sampler& g, const Context& c) {
    OracleData d{};
    const Trajectory curve = reconstruction(g, c, d);
    const double h = curve.step();
    auto vel = [&curve](std::size_t i) { return Vec2{curve.states[i][2], curve.states[i][3]}; };
    double w = 0.0;
    int n = 0;
    for (std::size_t i = 1; i + 1 < curve.size(); i += 10, ++n) {
      Jet jet{{curve.states[i][0], curve.states[i][1]},
              vel(i),
              (1.0 / (2 * h)) * (vel(i + 1) - vel(i - 1)),
              (1.0 / (h * h)) * (vel(i + 1) - 2.0 * vel(i) + vel(i - 1))};
      const Vec2 r = el_residual(jet, c.params());
      w = std::max({w, std::abs(r.x), std::abs(r.y)});
    }
    return Outcome{w, 1e-4, n, "jets by finite differences of reconstructed velocities"};
  });
  add("reconstruct_fixed_point_line", Suite::Reduction, [](Sampler& g, const Context& c) {
    const Vec2 p0 = oracle_data(g).p0, x0 = g.vec2();
    const Trajectory reduced = integrate(Formulation::ReducedLiePoisson,
                                         flatten(analytic_reduced(0, 0, 0, casimir_lsq(p0), c.params())), c.params(),
                                         1e-2, kStandardTEnd);
    const Trajectory curve = reconstruct(reduced, p0, x0);
    double w = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const Vec2 want = analytic_configuration(curve.times[i], 0, 0, p0, x0, c.params()).pos;
      w = std::max({w, std::abs(curve.states[i][0] - want.x), std::abs(curve.states[i][1] - want.y)});
    }
    return Outcome{w, 1e-10, static_cast<int>(curve.size()), "straight line (p0/m) t + x0"};
  });
  return r;
}

}  // namespace verify_detail

/// Names of the checks in a suite, sorted.
inline std::vector<std::string> check_names(Suite suite) {
  std::vector<std::string> out;
  for (const auto& spec : verify_detail::registry()) {
    if (suite == Suite::All || spec.suite == suite) out.push_back(spec.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Run every check of `suite`. Each check draws from its own stream derived
/// from (seed, check name), so the report depends only on the arguments.
/// Checks run concurrently; results are sorted by name.
inline std::vector<CheckResult> run_suite(Suite suite, std::uint64_t seed, const Params& params) {
  const verify_detail::Context ctx(seed, params);
  std::vector<std::future<CheckResult>> jobs;
  for (auto& spec : verify_detail::registry()) {
    if (suite != Suite::All && spec.suite != suite) continue;
    jobs.push_back(std::async(std::launch::async, [&ctx, spec = std::move(spec), seed] {
      CheckResult r;
      r.name = spec.name;
      r.suite = std::string(to_string(spec.suite));
      r.expected_fail = spec.expected_fail;
      Sampler rng(seed, spec.name);
      try {
        const verify_detail::Outcome o = spec.run(rng, ctx);
        r.residual = o.residual;
        r.tolerance = o.tolerance;
        r.n_samples = o.n_samples;
        r.notes = o.notes;
        r.passed = std::isfinite(o.residual) && o.residual <= o.tolerance;
      } catch (const std::exception& e) {
        r.residual = std::numeric_limits<double>::infinity();
        r.passed = false;
        r.notes = std::string("error: ") + e.what();
      }
      return r;
    }));
  }
  std::vector<CheckResult> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  std::sort(out.begin(), out.end(), [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return out;
}

inline const CheckResult* find_check(const std::vector<CheckResult>& results, std::string_view name) {
  for (const CheckResult& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace chiral
