#include <gtest/gtest.h>

#include "chiral/core.hpp"
#include "chiral/sampling.hpp"

namespace chiral {
namespace {

TEST(Core, CrossProductExamples) {
  EXPECT_EQ(cross({1, 0}, {0, 1}), 1.0);
  EXPECT_EQ(cross({1, 2}, {1, 2}), 0.0);
  EXPECT_EQ(cross({1, 2}, {3, 4}), -2.0);
  EXPECT_EQ(dot({1, 2}, {3, 4}), 11.0);
}

TEST(Core, CrossIsAntisymmetric) {
  Sampler rng(7, "cross");
  for (int i = 0; i < 100; ++i) {
    const Vec2 a = rng.vec2(), b = rng.vec2();
    EXPECT_EQ(cross(a, b) + cross(b, a), 0.0);
    EXPECT_EQ(cross(a, a), 0.0);
  }
}

TEST(Core, FlattenOrdering) {
  FullState z;
  z.pos.x = 1.0;
  Vector v = flatten(z);
  ASSERT_EQ(v.size(), 8);
  EXPECT_EQ(v, Vector::Unit(8, 0));

  FullState w;
  w.p1.y = 5.0;
  EXPECT_EQ(flatten(w)[7], 5.0);
  EXPECT_EQ(flatten(w).head(7), Vector::Zero(7));
}

TEST(Core, FlattenRoundTrip) {
  Sampler rng(11, "flatten");
  for (int i = 0; i < 100; ++i) {
    const FullState z = rng.full_state();
    EXPECT_EQ(unflatten(flatten(z)), z);
    const ReducedState s = rng.reduced_state();
    EXPECT_EQ(unflatten_reduced(flatten(s)), s);
  }
}

TEST(Core, UnflattenRejectsWrongSize) {
  try {
    unflatten(Vector::Zero(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Core, ParamsValidation) {
  EXPECT_THROW(Params(0.0, 1.0), Error);
  EXPECT_THROW(Params(1.0, 0.0), Error);
  EXPECT_THROW(Params(std::nan(""), 1.0), Error);
  EXPECT_NO_THROW(Params(-1.0, 2.0));
  EXPECT_DOUBLE_EQ(Params(2.0, 3.0).frequency(), 1.5);
}

TEST(Core, SqrtLambdaNeedsPositive) {
  EXPECT_DOUBLE_EQ(sqrt_lambda(Params(4.0, 1.0)), 2.0);
  try {
    sqrt_lambda(Params(-1.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeLambda);
  }
}

TEST(Core, OnSurfaceStateHasZeroConstraints) {
  const Params params(1.7, 0.4);
  Sampler rng(3, "surface");
  for (int i = 0; i < 50; ++i) {
    const Vec2 phi = constraint_values(rng.surface_state(params), params);
    EXPECT_EQ(phi.x, 0.0);
    EXPECT_EQ(phi.y, 0.0);
  }
}

TEST(Sampler, DeterministicAndRegular) {
  Sampler a(42, "s"), b(42, "s"), c(42, "t");
  const FullState za = a.full_state(), zb = b.full_state(), zc = c.full_state();
  EXPECT_EQ(za, zb);
  EXPECT_NE(za, zc);
  Sampler rng(5);
  for (int i = 0; i < 1000; ++i) {
    const FullState z = rng.full_state();
    EXPECT_GE(norm_sq(z.p0), 0.01);
    EXPECT_LE(std::abs(z.pos.x), 2.0);
  }
}

}  // namespace
}  // namespace chiral
