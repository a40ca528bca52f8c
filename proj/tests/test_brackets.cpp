#include <gtest/gtest.h>

#include "chiral/brackets.hpp"
#include "chiral/hamiltonians.hpp"
#include "chiral/sampling.hpp"
#include "chiral/symmetry.hpp"

namespace chiral {
namespace {

double entry(const PoissonStructure& p, const Vector& z, const char* a, const char* b) {
  return p(z)(p.index_of(a), p.index_of(b));
}

TEST(CanonicalBracket, BlockForm) {
  const PoissonStructure pc = canonical_bracket();
  const Vector z = Sampler(1).vector(8);
  EXPECT_EQ(entry(pc, z, "x", "p0x"), 1.0);
  EXPECT_EQ(entry(pc, z, "x", "y"), 0.0);
  EXPECT_EQ(entry(pc, z, "ydot", "p1y"), 1.0);
  EXPECT_EQ(entry(pc, z, "ydot", "p1x"), 0.0);
  Matrix expected = Matrix::Zero(8, 8);
  expected.topRightCorner(4, 4).setIdentity();
  expected.bottomLeftCorner(4, 4) = -Matrix::Identity(4, 4);
  EXPECT_EQ(pc(z), expected);
}

TEST(ChiralConstraints, GramMatrixIsMinusLambda) {
  const Params params(1.3, 1.0);
  const Matrix gram = gram_matrix(canonical_bracket(), chiral_constraints(params), Sampler(2).vector(8));
  EXPECT_DOUBLE_EQ(gram(0, 1), -1.3);
  EXPECT_DOUBLE_EQ(gram(1, 0), 1.3);
  EXPECT_EQ(gram(0, 0), 0.0);
}

TEST(DiracBracket, ConstructorReproducesTableEntries) {
  for (double lam : {0.5, 1.0, 2.0, -1.0}) {
    const Params params(lam, 1.0);
    const PoissonStructure pc = canonical_bracket();
    const Vector z = Sampler(3).vector(8);
    PoissonStructure built = dirac_bracket_constructed(params);
    EXPECT_NEAR(entry(built, z, "xdot", "ydot"), 1.0 / lam, 1e-12);
    EXPECT_NEAR(entry(built, z, "xdot", "p1x"), 0.5, 1e-12);
    EXPECT_NEAR(entry(built, z, "ydot", "p1y"), 0.5, 1e-12);
    EXPECT_NEAR(entry(built, z, "ydot", "p1x"), 0.0, 1e-12);
    EXPECT_NEAR(entry(built, z, "p1x", "p1y"), lam / 4.0, 1e-12);
    EXPECT_NEAR(entry(built, z, "x", "p0x"), 1.0, 1e-12);
    EXPECT_NEAR(entry(built, z, "y", "p0y"), 1.0, 1e-12);
  }
}

TEST(DiracBracket, ClosedFormMatchesConstructorForRandomLambda) {
  Sampler rng(4, "lambda");
  for (int i = 0; i < 20; ++i) {
    double lam = rng.uniform(-3.0, 3.0);
    if (std::abs(lam) < 0.05) lam = 0.05;
    const Params params(lam, rng.uniform(0.2, 2.0));
    const Vector z = rng.vector(8);
    const Matrix built = dirac_bracket_from_constraints(canonical_bracket(), chiral_constraints(params), z);
    const Matrix table = dirac_bracket_closed_form(params)(z);
    EXPECT_LT((built - table).cwiseAbs().maxCoeff(), 1e-12) << "lambda=" << lam;
  }
}

TEST(DiracBracket, ConstraintsAreCasimirs) {
  const Params params(0.7, 1.0);
  const PoissonStructure pd = dirac_bracket_closed_form(params);
  const ConstraintSet cs = chiral_constraints(params);
  const Vector z = Sampler(5).vector(8);
  for (const ScalarField& phi : cs.constraints) EXPECT_LT(check_casimir(pd, phi, z), 1e-15);
}

TEST(DiracBracket, SingularGramThrows) {
  const Params params(1.0, 1.0);
  ConstraintSet one = chiral_constraints(params);
  one.constraints.pop_back();
  try {
    dirac_bracket_from_constraints(canonical_bracket(), one, Vector::Zero(8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularGramMatrix);
  }
  ConstraintSet twice = chiral_constraints(params);
  twice.constraints[1] = twice.constraints[0];
  EXPECT_THROW(dirac_bracket_from_constraints(canonical_bracket(), twice, Vector::Zero(8)), Error);
}

TEST(FinalBracket, Entries) {
  const Params params(2.5, 1.0);
  const Vector w = Sampler(6).vector(6);
  const PoissonStructure darboux = final_bracket(params);
  EXPECT_EQ(entry(darboux, w, "q", "p"), 1.0);
  EXPECT_EQ(entry(darboux, w, "x", "p0x"), 1.0);
  EXPECT_EQ(entry(darboux, w, "x", "y"), 0.0);
  const PoissonStructure velocity = final_bracket(params, FinalChart::Velocity);
  EXPECT_DOUBLE_EQ(entry(velocity, w, "xdot", "ydot"), 1.0 / 2.5);
  EXPECT_EQ(entry(velocity, w, "y", "p0y"), 1.0);
}

TEST(Se2LiePoisson, DisplayedPattern) {
  Vector v(3);
  v << 0.0, 1.0, 0.0;
  const Matrix m = se2_lie_poisson(v);
  EXPECT_EQ(m(0, 2), 1.0);
  EXPECT_EQ(m(0, 1), 0.0);
  EXPECT_EQ(m(2, 0), -1.0);
  EXPECT_EQ(se2_lie_poisson(Vector::Zero(3)), Matrix::Zero(3, 3));
}

TEST(Se2LiePoisson, LengthSquaredIsCasimir) {
  Sampler rng(7, "se2");
  const PoissonStructure se2 = se2_structure();
  for (int i = 0; i < 100; ++i) {
    Vector v(3);
    const Vec2 p = rng.momentum();
    v << rng.coordinate(), p.x, p.y;
    EXPECT_LT(check_casimir(se2, lsq_field_se2(), v), 1e-12);
  }
}

TEST(OscLiePoisson, BracketRelations) {
  const Params params(0.8, 1.3);
  Sampler rng(8, "osc");
  const PoissonStructure osc = osc_structure(params);
  for (int i = 0; i < 20; ++i) {
    const ReducedState s = rng.reduced_state();
    const Matrix m = osc(flatten(s));
    EXPECT_EQ(m(0, 1), s.jy);
    EXPECT_EQ(m(0, 2), -s.jx);
    EXPECT_DOUBLE_EQ(m(1, 2), s.lsq / 0.8);
    EXPECT_EQ(m.row(3).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(m.col(3).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(check_casimir(osc, lsq_field_reduced(), flatten(s)), 1e-12);
  }
}

TEST(OscLiePoisson, ParaboloidFunctionIsBlockCasimir) {
  const Params params(1.4, 0.6);
  Sampler rng(9, "block");
  for (int i = 0; i < 100; ++i) {
    const ReducedState s = rng.reduced_state();
    Vector v(3);
    v << s.jr, s.jx, s.jy;
    EXPECT_LT(check_casimir(osc_block_structure(s.lsq, params), paraboloid_field_block(s.lsq, params), v), 1e-12);
  }
}

TEST(BracketOfFunctions, CanonicalPairAndFiniteDifferenceFallback) {
  const PoissonStructure pc = canonical_bracket();
  auto coord = [](int i, bool analytic) {
    ScalarField f{"c", 8, [i](const Vector& z) { return z[i]; }, {}};
    if (analytic) f.gradient_fn = [i](const Vector&) -> Vector { return Vector::Unit(8, i); };
    return f;
  };
  const Vector z = Sampler(10).vector(8);
  EXPECT_EQ(bracket_of_functions(pc, coord(idx::x, true), coord(idx::p0x, true), z), 1.0);
  EXPECT_NEAR(bracket_of_functions(pc, coord(idx::x, false), coord(idx::p0x, false), z), 1.0, 1e-9);
}

TEST(BracketOfFunctions, DimensionMismatch) {
  ScalarField small{"s", 3, [](const Vector&) { return 0.0; }, {}};
  try {
    bracket_of_functions(canonical_bracket(), small, small, Vector::Zero(8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(BracketOfFunctions, InvariantTriplesCloseOnOscStar) {
  const Params params(1.2, 0.9);
  Sampler rng(11, "closure");
  const auto jc = invariant_fields_canonical(params);
  const auto jd = invariant_fields_dirac(params);
  const PoissonStructure pc = canonical_bracket();
  const PoissonStructure pd = dirac_bracket_closed_form(params);
  for (int i = 0; i < 200; ++i) {
    const Vector z = flatten(rng.full_state());
    const ReducedState c = invariants_canonical(unflatten(z), params);
    EXPECT_NEAR(bracket_of_functions(pc, jc[0], jc[1], z), c.jy, 1e-9);
    EXPECT_NEAR(bracket_of_functions(pc, jc[0], jc[2], z), -c.jx, 1e-9);
    EXPECT_NEAR(bracket_of_functions(pc, jc[1], jc[2], z), c.lsq / params.lambda(), 1e-9);
    const ReducedState d = invariants_dirac(unflatten(z), params);
    EXPECT_NEAR(bracket_of_functions(pd, jd[0], jd[1], z), d.jy, 1e-9);
    EXPECT_NEAR(bracket_of_functions(pd, jd[0], jd[2], z), -d.jx, 1e-9);
    EXPECT_NEAR(bracket_of_functions(pd, jd[1], jd[2], z), d.lsq / params.lambda(), 1e-9);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(bracket_of_functions(pc, jc[k], jc[3], z), 0.0, 1e-12);
      EXPECT_NEAR(bracket_of_functions(pd, jd[k], jd[3], z), 0.0, 1e-12);
    }
  }
}

TEST(Jacobi, AllStructuresAtRandomPoints) {
  const Params params(0.9, 1.1);
  Sampler rng(12, "jacobi");
  const std::vector<PoissonStructure> structures = {canonical_bracket(), dirac_bracket_closed_form(params),
                                                    final_bracket(params), osc_structure(params), se2_structure()};
  for (const PoissonStructure& p : structures) {
    for (int i = 0; i < 100; ++i) {
      const Vector z = rng.vector(p.dim);
      EXPECT_EQ(check_antisymmetry(p, z), 0.0) << p.name;
      EXPECT_LT(check_jacobi(p, z), 1e-9) << p.name;
    }
  }
  EXPECT_EQ(check_jacobi(canonical_bracket(), rng.vector(8)), 0.0);
}

TEST(Jacobi, FiniteDifferenceFallbackOnLinearStructure) {
  const Params params(1.0, 1.0);
  PoissonStructure osc = osc_structure(params);
  osc.derivative_fn = nullptr;
  Sampler rng(13, "jacobi-fd");
  for (int i = 0; i < 50; ++i) EXPECT_LT(check_jacobi(osc, flatten(rng.reduced_state())), 1e-6);
}

TEST(Jacobi, CorruptedMatrixFails) {
  const Params params(1.0, 1.0);
  const PoissonStructure bad = corrupted_osc_structure(params);
  ReducedState s{0.3, 0.7, 1.5, 2.0};
  // Jacobi sum for (J_R, J_X, J_Y) is (l^2/lambda) J_Y = 3.
  EXPECT_NEAR(check_jacobi(bad, flatten(s)), 3.0, 1e-6);
  EXPECT_EQ(check_antisymmetry(bad, flatten(s)), 0.0);
}

TEST(Jacobi, ConstructedDiracStructureIsPoisson) {
  const Params params(1.6, 1.0);
  const PoissonStructure built = dirac_bracket_constructed(params);
  Sampler rng(14, "built");
  for (int i = 0; i < 10; ++i) EXPECT_LT(check_jacobi(built, rng.vector(8)), 1e-6);
}

}  // namespace
}  // namespace chiral
