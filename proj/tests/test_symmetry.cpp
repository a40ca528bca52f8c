#include <gtest/gtest.h>

#include <numbers>

#include "chiral/dynamics.hpp"
#include "chiral/sampling.hpp"
#include "chiral/symmetry.hpp"

namespace chiral {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(GroupAction, PlaneExamples) {
  const Vec2 x{0.3, -1.2};
  EXPECT_EQ(act_on_plane({}, x), x);
  const Vec2 r = act_on_plane({kPi / 2, {0, 0}}, {1, 0});
  EXPECT_NEAR(r.x, 0.0, 1e-15);
  EXPECT_NEAR(r.y, 1.0, 1e-15);
}

TEST(GroupAction, CompositionMatchesSuccessiveActions) {
  Sampler rng(31, "compose");
  for (int i = 0; i < 100; ++i) {
    const GroupElement g{rng.uniform(-kPi, kPi), rng.vec2()}, h{rng.uniform(-kPi, kPi), rng.vec2()};
    const Vec2 x = rng.vec2();
    const Vec2 lhs = act_on_plane(compose(g, h), x), rhs = act_on_plane(g, act_on_plane(h, x));
    EXPECT_NEAR(lhs.x, rhs.x, 1e-12);
    EXPECT_NEAR(lhs.y, rhs.y, 1e-12);
  }
}

TEST(GroupAction, LagrangianIsInvariant) {
  Sampler rng(32, "lag");
  const Params params(1.4, 0.9);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g{rng.uniform(-kPi, kPi), rng.vec2()};
    const Jet jet{rng.vec2(), rng.vec2(), rng.vec2(), rng.vec2()};
    const Jet moved = act_on_jet(g, jet);
    EXPECT_NEAR(lagrangian(moved.vel, moved.acc, params), lagrangian(jet.vel, jet.acc, params), 1e-12);
  }
}

void expect_vec_near(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LT(max_abs(a - b), tol) << "a=" << a.transpose() << " b=" << b.transpose();
}

TEST(Generators, Se2AlgebraTableOnEveryLevel) {
  Sampler rng(33, "lb");
  for (const Se2Fields& f : {generators_plane(), tangent_lifts(), cotangent_lifts()}) {
    for (int i = 0; i < 20; ++i) {
      const Vector z = rng.vector(f.r.dim);
      expect_vec_near(algebra_bracket(f.r, f.x, z), f.y(z), 1e-9);
      expect_vec_near(algebra_bracket(f.r, f.y, z), -f.x(z), 1e-9);
      expect_vec_near(algebra_bracket(f.x, f.y, z), Vector::Zero(f.r.dim), 1e-9);
    }
  }
}

TEST(Generators, CommutatorConvention) {
  const Se2Fields f = generators_plane();
  const Vector z = Sampler(34).vector(2);
  expect_vec_near(lie_bracket(f.r, f.x, z), -f.y(z), 1e-15);
  expect_vec_near(lie_bracket(f.x, f.y, z), Vector::Zero(2), 1e-15);
  expect_vec_near(lie_bracket(f.r, f.r, z), Vector::Zero(2), 1e-15);
  // Same result through finite-difference Jacobians.
  VectorField r_fd = f.r, x_fd = f.x;
  r_fd.jacobian_fn = nullptr;
  x_fd.jacobian_fn = nullptr;
  expect_vec_near(lie_bracket(r_fd, x_fd, z), -f.y(z), 1e-9);
}

TEST(Generators, LiftsAreCoordinateTranslations) {
  const Se2Fields lifts = cotangent_lifts();
  const Vector z = Sampler(35).vector(8);
  expect_vec_near(lifts.x(z), Vector::Unit(8, idx::x), 1e-15);
  expect_vec_near(lifts.y(z), Vector::Unit(8, idx::y), 1e-15);
  FullState s;
  s.p0 = {1, 0};
  EXPECT_EQ(lifts.r(flatten(s))[idx::p0y], 1.0);
  EXPECT_THROW(lie_bracket(lifts.r, generators_plane().x, z), Error);
}

TEST(MomentumMaps, FullSpace) {
  FullState z;
  z.pos = {1, 0};
  z.p0 = {0, 2};
  EXPECT_EQ(momentum_map_full(z)[0], 2.0);

  const PoissonStructure pc = canonical_bracket();
  const auto fields = momentum_map_full_fields();
  const Se2Fields lifts = cotangent_lifts();
  Sampler rng(36, "mu");
  for (int i = 0; i < 100; ++i) {
    const Vector v = flatten(rng.full_state());
    expect_vec_near(hamiltonian_vector(pc, fields[0], v), lifts.r(v), 1e-12);
    expect_vec_near(hamiltonian_vector(pc, fields[1], v), lifts.x(v), 1e-12);
    expect_vec_near(hamiltonian_vector(pc, fields[2], v), lifts.y(v), 1e-12);
  }
}

TEST(MomentumMaps, CotangentPlaneReproducesSe2Table) {
  const auto a = momentum_map_cotangent_plane({1, 0}, {0, 1});
  EXPECT_EQ(a, (std::array<double, 3>{1, 0, 1}));
  const auto b = momentum_map_cotangent_plane({0, 0}, {0.4, -0.2});
  EXPECT_EQ(b, (std::array<double, 3>{0, 0.4, -0.2}));

  const PoissonStructure tm = cotangent_plane_bracket();
  const auto j = momentum_map_cotangent_plane_fields();
  Sampler rng(37, "tm");
  for (int n = 0; n < 50; ++n) {
    const Vector v = rng.vector(4);
    Vector mp(3);
    const auto values = momentum_map_cotangent_plane({v[0], v[1]}, {v[2], v[3]});
    mp << values[0], values[1], values[2];
    const Matrix expected = se2_lie_poisson(mp);
    for (int a2 = 0; a2 < 3; ++a2) {
      for (int b2 = 0; b2 < 3; ++b2) {
        EXPECT_NEAR(bracket_of_functions(tm, j[a2], j[b2], v), expected(a2, b2), 1e-12);
      }
    }
  }
}

TEST(MomentumMaps, Plane) {
  EXPECT_EQ(momentum_map_plane({1, 0}), (std::array<double, 3>{0.5, 0, -1}));
  EXPECT_EQ(momentum_map_plane({0, 0}), (std::array<double, 3>{0, 0, 0}));
}

TEST(Cocycle, PlaneValuesAndIdentity) {
  Sampler rng(38, "cocycle");
  for (int i = 0; i < 20; ++i) {
    const Vec2 p = rng.vec2();
    EXPECT_NEAR(cocycle_plane(kX, kY, p), 1.0, 1e-12);
    EXPECT_NEAR(cocycle_plane(kY, kR, p), 0.0, 1e-12);
    EXPECT_NEAR(cocycle_plane(kR, kX, p), 0.0, 1e-12);
    const double identity = cocycle_plane(field_commutator(kX, kY), kR, p) +
                            cocycle_plane(field_commutator(kY, kR), kX, p) +
                            cocycle_plane(field_commutator(kR, kX), kY, p);
    EXPECT_NEAR(identity, 0.0, 1e-12);
  }
}

TEST(Cocycle, FullRealization) {
  FullState z;
  z.p0 = {3, 4};
  EXPECT_DOUBLE_EQ(cocycle_full(z, Params(2, 1)), 12.5);
  const Params params(0.7, 1.0);
  const auto jd = invariant_fields_dirac(params);
  Sampler rng(39, "theta");
  for (int i = 0; i < 50; ++i) {
    const FullState s = rng.full_state();
    EXPECT_NEAR(bracket_of_functions(dirac_bracket_closed_form(params), jd[1], jd[2], flatten(s)),
                cocycle_full(s, params), 1e-12);
  }
}

TEST(Invariants, Examples) {
  FullState z;
  z.vel = {1, 0};
  z.p1 = {0, 1};
  const ReducedState c = invariants_canonical(z, Params(1, 1));
  EXPECT_EQ(c, (ReducedState{1, 0, 0, 0}));

  FullState w;
  w.vel = {1, 0};
  w.p0 = {0, 1};
  EXPECT_EQ(invariants_dirac(w, Params(1, 1)), (ReducedState{-0.5, 0, -1, 1}));
  w.vel = {0, 0};
  EXPECT_EQ(invariants_dirac(w, Params(1, 1)), (ReducedState{0, 0, 0, 1}));
}

TEST(Invariants, GroupInvariance) {
  Sampler rng(40, "inv");
  const Params params(1.3, 0.5);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g{rng.uniform(-kPi, kPi), rng.vec2()};
    const FullState z = rng.full_state();
    const FullState gz = act_on_full_state(g, z);
    expect_vec_near(flatten(invariants_canonical(gz, params)), flatten(invariants_canonical(z, params)), 1e-12);
    expect_vec_near(flatten(invariants_dirac(gz, params)), flatten(invariants_dirac(z, params)), 1e-12);
  }
}

TEST(Invariants, InfinitesimalInvariance) {
  Sampler rng(41, "dJF");
  const Params params(0.8, 1.2);
  const Se2Fields lifts = cotangent_lifts();
  std::vector<ScalarField> fields;
  for (const auto& f : invariant_fields_canonical(params)) fields.push_back(f);
  for (const auto& f : invariant_fields_dirac(params)) fields.push_back(f);
  for (int i = 0; i < 100; ++i) {
    const Vector z = flatten(rng.full_state());
    for (const ScalarField& j : fields) {
      for (const VectorField* f : {&lifts.r, &lifts.x, &lifts.y}) {
        EXPECT_LT(std::abs(j.gradient(z).dot((*f)(z))), 1e-12) << j.name << " along " << f->name;
      }
    }
    // mu is rotation-invariant but shifts under translations.
    const ScalarField mu = momentum_map_full_fields()[0];
    EXPECT_LT(std::abs(mu.gradient(z).dot(lifts.r(z))), 1e-12);
  }
}

TEST(Invariants, CoincideOnConstraintSurface) {
  Sampler rng(42, "coincide");
  for (int i = 0; i < 200; ++i) {
    const Params params(rng.uniform(0.3, 2.5), 1.0);
    const FullState z = rng.surface_state(params);
    expect_vec_near(flatten(invariants_canonical(z, params)), flatten(invariants_dirac(z, params)), 1e-12);
  }
}

TEST(Invariants, ParaboloidIdentity) {
  Sampler rng(43, "parab");
  for (int i = 0; i < 1000; ++i) {
    const Params params(rng.uniform(0.3, 2.5), 1.0);
    EXPECT_LT(std::abs(paraboloid_residual(invariants_dirac(rng.full_state(), params), params)), 1e-12);
  }
}

TEST(DiracLifts, HamiltonianWithRespectToDiracBracket) {
  const Params params(1.6, 0.7);
  const PoissonStructure pd = dirac_bracket_closed_form(params);
  const OscLiftFields lifts = dirac_lift_fields(params);
  const auto j = invariant_fields_dirac(params);
  ScalarField center{"lsq/lambda", 8, [&](const Vector& v) { return j[3](v) / params.lambda(); },
                     [&](const Vector& v) -> Vector { return j[3].gradient(v) / params.lambda(); }};
  Sampler rng(44, "lifts");
  for (int i = 0; i < 100; ++i) {
    const Vector z = flatten(rng.full_state());
    expect_vec_near(lifts.r(z), hamiltonian_vector(pd, j[0], z), 1e-12);
    expect_vec_near(lifts.x(z), hamiltonian_vector(pd, j[1], z), 1e-12);
    expect_vec_near(lifts.y(z), hamiltonian_vector(pd, j[2], z), 1e-12);
    expect_vec_near(lifts.center(z), hamiltonian_vector(pd, center, z), 1e-12);
  }
}

TEST(DiracLifts, PrintedComponents) {
  const Params params(2.0, 1.0);
  const OscLiftFields lifts = dirac_lift_fields(params);
  FullState s;
  s.vel = {0.3, -0.4};
  s.p0 = {1.0, 2.0};
  const Vector fx = lifts.x(flatten(s));
  EXPECT_DOUBLE_EQ(fx[idx::x], 0.3);
  EXPECT_DOUBLE_EQ(fx[idx::y], -0.4);
  EXPECT_DOUBLE_EQ(fx[idx::xdot], 1.0);   // p0y / lambda
  EXPECT_DOUBLE_EQ(fx[idx::ydot], -0.5);  // -p0x / lambda
  const Vector fc = lifts.center(flatten(s));
  EXPECT_DOUBLE_EQ(fc[idx::x], 1.0);
  EXPECT_DOUBLE_EQ(fc[idx::y], 2.0);
}

TEST(DiracLifts, OscillatorCommutators) {
  Sampler rng(45, "osc");
  const Params params(0.9, 1.4);
  const OscLiftFields f = dirac_lift_fields(params);
  for (int i = 0; i < 200; ++i) {
    const Vector z = flatten(rng.full_state());
    expect_vec_near(lie_bracket(f.r, f.x, z), -f.y(z), 1e-9);
    expect_vec_near(lie_bracket(f.r, f.y, z), f.x(z), 1e-9);
    expect_vec_near(lie_bracket(f.x, f.y, z), -f.center(z), 1e-9);
    for (const VectorField* g : {&f.r, &f.x, &f.y}) {
      expect_vec_near(lie_bracket(f.center, *g, z), Vector::Zero(8), 1e-9);
    }
  }
}

TEST(Darboux, ForwardExampleAndInverse) {
  const Params params(4.0, 1.0);
  FullState z;
  z.vel = {0, 3};
  const DarbouxState w = darboux_forward(z, params);
  EXPECT_DOUBLE_EQ(w.q, 6.0);
  EXPECT_EQ(w.p, 0.0);
  EXPECT_DOUBLE_EQ(inverse_legendre(w, params).vel.y, 3.0);

  Sampler rng(46, "darboux");
  for (int i = 0; i < 100; ++i) {
    const FullState s = rng.full_state();
    EXPECT_EQ(darboux_inverse(darboux_forward(s, params), params).pos, s.pos);
    expect_vec_near(flatten(darboux_inverse(darboux_forward(s, params), params)), flatten(s), 1e-12);
  }
  try {
    darboux_forward(z, Params(-1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeLambda);
  }
}

TEST(Darboux, ConstraintsVanishExactlyOnSurface) {
  const Params params(1.5, 1.0);
  Sampler rng(47, "phi");
  const FullState on = rng.surface_state(params);
  EXPECT_EQ(darboux_forward(on, params).phi, (Vec2{0, 0}));
  FullState off = on;
  off.p1.x += 0.25;
  EXPECT_DOUBLE_EQ(darboux_forward(off, params).phi.x, 0.25);
}

TEST(Darboux, JacobianAndCongruence) {
  const Params params(1.7, 1.0);
  const Matrix jac = darboux_jacobian(params);
  Sampler rng(48, "cong");
  const Vector z = flatten(rng.full_state());
  auto forward = [&params](const Vector& v) -> Vector {
    const DarbouxState w = darboux_forward(unflatten(v), params);
    Vector out(8);
    out << flatten(w), w.phi.x, w.phi.y;
    return out;
  };
  EXPECT_LT((fd_jacobian(forward, z) - jac).cwiseAbs().maxCoeff(), 1e-8);

  const Matrix pw = jac * dirac_bracket_closed_form(params)(z) * jac.transpose();
  Matrix expected = Matrix::Zero(8, 8);
  expected.topLeftCorner(6, 6) = final_bracket(params)(Vector::Zero(6));
  EXPECT_LT((pw - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(pw(2, 5), 1.0, 1e-12);  // {q, p}_D
}

TEST(InverseLegendre, RoundTripOnSurface) {
  Sampler rng(49, "legendre");
  for (int i = 0; i < 100; ++i) {
    const Params params(rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0));
    const FullState z = rng.surface_state(params);
    const DarbouxState w = darboux_forward(z, params);
    const LegendreVelocity v = inverse_legendre(w, params);
    const FullState back = on_surface(w.pos, v.vel, w.p0, params);
    expect_vec_near(flatten(darboux_forward(back, params)), flatten(w), 1e-12);
    expect_vec_near(flatten(back), flatten(z), 1e-12);
  }
}

TEST(InverseLegendre, QdotAlongDarbouxTrajectory) {
  const Params params(1.0, 1.0);
  const FullState z0 = on_surface({0.1, -0.2}, {0.5, 0.3}, {0.8, -0.6}, params);
  const Trajectory traj =
      integrate(Formulation::DarbouxCanonicalH, flatten(darboux_forward(z0, params)), params, 1e-3, 2.0);
  const double h = traj.step();
  for (std::size_t i = 1; i + 1 < traj.size(); i += 97) {
    const double numeric = (traj.states[i + 1][2] - traj.states[i - 1][2]) / (2.0 * h);
    const double formula = inverse_legendre(unflatten_darboux(traj.states[i]), params).qdot;
    EXPECT_NEAR(numeric, formula, 1e-6);
  }
}

}  // namespace
}  // namespace chiral
