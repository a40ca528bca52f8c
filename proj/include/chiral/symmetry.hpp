#pragma once

#include <array>
#include <cmath>

#include "chiral/brackets.hpp"
#include "chiral/core.hpp"
#include "chiral/fields.hpp"
#include "chiral/hamiltonians.hpp"

namespace chiral {

// ---------------------------------------------------------------------------
// SE(2) group action

inline Vec2 rotate(double theta, Vec2 v) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Rotation by `theta` followed by translation by `a`.
struct GroupElement {
  double theta = 0.0;
  Vec2 a;
};

/// (g * h)(x) = g(h(x)).
inline GroupElement compose(const GroupElement& g, const GroupElement& h) {
  return {g.theta + h.theta, rotate(g.theta, h.a) + g.a};
}

inline Vec2 act_on_plane(const GroupElement& g, Vec2 x) { return rotate(g.theta, x) + g.a; }

/// Prolonged action on a curve jet: positions move rigidly, derivatives rotate.
inline Jet act_on_jet(const GroupElement& g, const Jet& jet) {
  return {act_on_plane(g, jet.pos), rotate(g.theta, jet.vel), rotate(g.theta, jet.acc),
          rotate(g.theta, jet.jerk)};
}

/// Cotangent lift of the tangent lift to T*TM (rotations act on every vector slot).
inline FullState act_on_full_state(const GroupElement& g, const FullState& z) {
  return {act_on_plane(g, z.pos), rotate(g.theta, z.vel), rotate(g.theta, z.p0), rotate(g.theta, z.p1)};
}

// ---------------------------------------------------------------------------
// Vector fields and brackets

/// Commutator [F, G](z) = DG(z) F(z) - DF(z) G(z) of vector fields.
inline Vector lie_bracket(const VectorField& f, const VectorField& g, const Vector& z) {
  require_dim(g.dim, f.dim, "lie_bracket");
  return g.jacobian(z) * f(z) - f.jacobian(z) * g(z);
}

/// Lie-algebra bracket read off from fundamental fields of a left action.
/// The generator map is an anti-homomorphism, so [xi, eta]_M = -[xi_M, eta_M];
/// this is the convention in which [R, X] = Y.
inline Vector algebra_bracket(const VectorField& f, const VectorField& g, const Vector& z) {
  return -lie_bracket(f, g, z);
}

struct Se2Fields {
  VectorField r;
  VectorField x;
  VectorField y;
};

/// R = x d/dy - y d/dx, X = d/dx, Y = d/dy on M = R^2.
inline Se2Fields generators_plane() {
  Matrix rot = Matrix::Zero(2, 2);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  return {affine_field("R", rot, Vector::Zero(2)), affine_field("X", Matrix::Zero(2, 2), Vector::Unit(2, 0)),
          affine_field("Y", Matrix::Zero(2, 2), Vector::Unit(2, 1))};
}

namespace detail {
// Infinitesimal rotation acting on the coordinate pairs starting at `starts`.
inline Matrix rotation_generator(int dim, std::initializer_list<int> starts) {
  Matrix m = Matrix::Zero(dim, dim);
  for (int s : starts) {
    m(s, s + 1) = -1.0;
    m(s + 1, s) = 1.0;
  }
  return m;
}
}  // namespace detail

/// Tangent lifts to TM in (x, y, xdot, ydot).
inline Se2Fields tangent_lifts() {
  return {affine_field("F_R^TM", detail::rotation_generator(4, {0, 2}), Vector::Zero(4)),
          affine_field("F_X^TM", Matrix::Zero(4, 4), Vector::Unit(4, 0)),
          affine_field("F_Y^TM", Matrix::Zero(4, 4), Vector::Unit(4, 1))};
}

/// Cotangent lifts of tangent lifts to T*TM.
inline Se2Fields cotangent_lifts() {
  return {affine_field("F_R^T*TM", detail::rotation_generator(kFullDim, {0, 2, 4, 6}), Vector::Zero(kFullDim)),
          affine_field("F_X^T*TM", Matrix::Zero(kFullDim, kFullDim), Vector::Unit(kFullDim, idx::x)),
          affine_field("F_Y^T*TM", Matrix::Zero(kFullDim, kFullDim), Vector::Unit(kFullDim, idx::y))};
}

// ---------------------------------------------------------------------------
// Momentum maps

/// (mu, p0x, p0y) with angular momentum mu = x x p0 + xdot x p1.
inline std::array<double, 3> momentum_map_full(const FullState& z) {
  return {cross(z.pos, z.p0) + cross(z.vel, z.p1), z.p0.x, z.p0.y};
}

inline std::array<ScalarField, 3> momentum_map_full_fields() {
  ScalarField mu{"mu", kFullDim, [](const Vector& v) { return momentum_map_full(unflatten(v))[0]; },
                 [](const Vector& v) -> Vector {
                   Vector g(kFullDim);
                   g << v[idx::p0y], -v[idx::p0x], v[idx::p1y], -v[idx::p1x],  //
                       -v[idx::y], v[idx::x], -v[idx::ydot], v[idx::xdot];
                   return g;
                 }};
  auto coordinate = [](const char* name, int i) {
    return ScalarField{name, kFullDim, [i](const Vector& v) { return v[i]; },
                       [i](const Vector&) -> Vector { return Vector::Unit(kFullDim, i); }};
  };
  return {std::move(mu), coordinate("p0x", idx::p0x), coordinate("p0y", idx::p0y)};
}

/// Momentum map (x x p0, p0) of T*M.
inline std::array<double, 3> momentum_map_cotangent_plane(Vec2 x, Vec2 p0) {
  return {cross(x, p0), p0.x, p0.y};
}

/// Components of momentum_map_cotangent_plane as functions of (x, y, p0x, p0y).
inline std::array<ScalarField, 3> momentum_map_cotangent_plane_fields() {
  ScalarField mu{"mu", 4, [](const Vector& v) { return v[0] * v[3] - v[1] * v[2]; },
                 [](const Vector& v) -> Vector {
                   Vector g(4);
                   g << v[3], -v[2], -v[1], v[0];
                   return g;
                 }};
  auto coordinate = [](const char* name, int i) {
    return ScalarField{name, 4, [i](const Vector& v) { return v[i]; },
                       [i](const Vector&) -> Vector { return Vector::Unit(4, i); }};
  };
  return {std::move(mu), coordinate("p0x", 2), coordinate("p0y", 3)};
}

/// Momentum map (|x|^2/2, y, -x) of SE(2) acting on (R^2, dx ^ dy).
inline std::array<double, 3> momentum_map_plane(Vec2 x) { return {0.5 * norm_sq(x), x.y, -x.x}; }

/// Element r R + a X + b Y of se(2).
struct Se2Element {
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
};

inline constexpr Se2Element kR{1.0, 0.0, 0.0};
inline constexpr Se2Element kX{0.0, 1.0, 0.0};
inline constexpr Se2Element kY{0.0, 0.0, 1.0};

/// Fundamental field of `xi` on the plane.
inline VectorField plane_generator(const Se2Element& xi) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = -xi.r;
  a(1, 0) = xi.r;
  Vector b(2);
  b << xi.a, xi.b;
  return affine_field("xi_M", a, b);
}

/// <J^M, xi> as a function on the plane.
inline ScalarField plane_momentum(const Se2Element& xi) {
  return {"J^M", 2,
          [xi](const Vector& v) {
            const auto j = momentum_map_plane({v[0], v[1]});
            return xi.r * j[0] + xi.a * j[1] + xi.b * j[2];
          },
          [xi](const Vector& v) -> Vector {
            Vector g(2);
            g << xi.r * v[0] - xi.b, xi.r * v[1] + xi.a;
            return g;
          }};
}

/// Element whose fundamental field equals the commutator [xi_M, eta_M],
/// recovered from the commutator at the origin and at (1, 0).
inline Se2Element field_commutator(const Se2Element& xi, const Se2Element& eta) {
  const VectorField f = plane_generator(xi), g = plane_generator(eta);
  const Vector at_origin = lie_bracket(f, g, Vector::Zero(2));
  const Vector at_unit = lie_bracket(f, g, Vector::Unit(2, 0));
  return {at_unit[1] - at_origin[1], at_origin[0], at_origin[1]};
}

/// Two-cocycle Theta(xi, eta) = {J_xi, J_eta} - J_[xi,eta] of the plane
/// realization, evaluated at `point` (it is constant in the point). The
/// bracket inside J_[.,.] is the commutator of the generating fields.
inline double cocycle_plane(const Se2Element& xi, const Se2Element& eta, Vec2 point = {}) {
  Vector z(2);
  z << point.x, point.y;
  const double poisson = bracket_of_functions(plane_bracket(), plane_momentum(xi), plane_momentum(eta), z);
  return poisson - plane_momentum(field_commutator(xi, eta))(z);
}

/// Cocycle of the full-space realization: Theta(z) = l^2/lambda.
inline double cocycle_full(const FullState& z, const Params& params) {
  return casimir_lsq(z.p0) / params.lambda();
}

// ---------------------------------------------------------------------------
// Invariant triples

/// Canonical-bracket invariants:
/// J_R = xdot x p1, J_X = (1/2) xdot.p0 - (1/lambda) p0 x p1,
/// J_Y = -(1/2) xdot x p0 + (1/lambda) p0.p1, lsq = |p0|^2.
inline ReducedState invariants_canonical(const FullState& z, const Params& params) {
  const double inv = 1.0 / params.lambda();
  return {cross(z.vel, z.p1), 0.5 * dot(z.vel, z.p0) - inv * cross(z.p0, z.p1),
          -0.5 * cross(z.vel, z.p0) + inv * dot(z.p0, z.p1), casimir_lsq(z.p0)};
}

/// Invariants with p1 eliminated by the constraints:
/// J_R^D = -(lambda/2)|xdot|^2, J_X^D = xdot.p0, J_Y^D = -xdot x p0.
inline ReducedState invariants_dirac(const FullState& z, const Params& params) {
  return {-0.5 * params.lambda() * norm_sq(z.vel), dot(z.vel, z.p0), -cross(z.vel, z.p0), casimir_lsq(z.p0)};
}

inline std::array<ScalarField, 4> invariant_fields_canonical(const Params& params) {
  const double inv = 1.0 / params.lambda();
  auto pick = [params](int k) {
    return [params, k](const Vector& v) { return flatten(invariants_canonical(unflatten(v), params))[k]; };
  };
  ScalarField jr{"J_R", kFullDim, pick(0), [](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = v[idx::p1y];
                   g[idx::ydot] = -v[idx::p1x];
                   g[idx::p1x] = -v[idx::ydot];
                   g[idx::p1y] = v[idx::xdot];
                   return g;
                 }};
  ScalarField jx{"J_X", kFullDim, pick(1), [inv](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = 0.5 * v[idx::p0x];
                   g[idx::ydot] = 0.5 * v[idx::p0y];
                   g[idx::p0x] = 0.5 * v[idx::xdot] - inv * v[idx::p1y];
                   g[idx::p0y] = 0.5 * v[idx::ydot] + inv * v[idx::p1x];
                   g[idx::p1x] = inv * v[idx::p0y];
                   g[idx::p1y] = -inv * v[idx::p0x];
                   return g;
                 }};
  ScalarField jy{"J_Y", kFullDim, pick(2), [inv](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = -0.5 * v[idx::p0y];
                   g[idx::ydot] = 0.5 * v[idx::p0x];
                   g[idx::p0x] = 0.5 * v[idx::ydot] + inv * v[idx::p1x];
                   g[idx::p0y] = -0.5 * v[idx::xdot] + inv * v[idx::p1y];
                   g[idx::p1x] = inv * v[idx::p0x];
                   g[idx::p1y] = inv * v[idx::p0y];
                   return g;
                 }};
  return {std::move(jr), std::move(jx), std::move(jy), lsq_field_full()};
}

inline std::array<ScalarField, 4> invariant_fields_dirac(const Params& params) {
  const double lam = params.lambda();
  auto pick = [params](int k) {
    return [params, k](const Vector& v) { return flatten(invariants_dirac(unflatten(v), params))[k]; };
  };
  ScalarField jr{"J_R^D", kFullDim, pick(0), [lam](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = -lam * v[idx::xdot];
                   g[idx::ydot] = -lam * v[idx::ydot];
                   return g;
                 }};
  ScalarField jx{"J_X^D", kFullDim, pick(1), [](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = v[idx::p0x];
                   g[idx::ydot] = v[idx::p0y];
                   g[idx::p0x] = v[idx::xdot];
                   g[idx::p0y] = v[idx::ydot];
                   return g;
                 }};
  ScalarField jy{"J_Y^D", kFullDim, pick(2), [](const Vector& v) -> Vector {
                   Vector g = Vector::Zero(kFullDim);
                   g[idx::xdot] = -v[idx::p0y];
                   g[idx::ydot] = v[idx::p0x];
                   g[idx::p0x] = v[idx::ydot];
                   g[idx::p0y] = -v[idx::xdot];
                   return g;
                 }};
  return {std::move(jr), std::move(jx), std::move(jy), lsq_field_full()};
}

/// Fields generated by (J_R^D, J_X^D, J_Y^D, l^2/lambda) under the Dirac bracket:
///   F_R = xdot d/dydot - ydot d/dxdot
///   F_X = xdot d/dx + ydot d/dy + (1/lambda)(p0y d/dxdot - p0x d/dydot)
///   F_Y = ydot d/dx - xdot d/dy + (1/lambda)(p0x d/dxdot + p0y d/dydot)
///   F_{l^2/lambda} = (2/lambda)(p0x d/dx + p0y d/dy)
/// The p1 components are fixed by tangency to phi = 0:
/// dp1x = (lambda/2) dydot, dp1y = -(lambda/2) dxdot.
struct OscLiftFields {
  VectorField r;
  VectorField x;
  VectorField y;
  VectorField center;
};

inline OscLiftFields dirac_lift_fields(const Params& params) {
  const double lam = params.lambda(), inv = 1.0 / lam;
  auto with_p1 = [lam](Matrix a) {
    a.row(idx::p1x) = 0.5 * lam * a.row(idx::ydot);
    a.row(idx::p1y) = -0.5 * lam * a.row(idx::xdot);
    return a;
  };
  const Vector zero = Vector::Zero(kFullDim);

  Matrix fr = Matrix::Zero(kFullDim, kFullDim);
  fr(idx::xdot, idx::ydot) = -1.0;
  fr(idx::ydot, idx::xdot) = 1.0;

  Matrix fx = Matrix::Zero(kFullDim, kFullDim);
  fx(idx::x, idx::xdot) = 1.0;
  fx(idx::y, idx::ydot) = 1.0;
  fx(idx::xdot, idx::p0y) = inv;
  fx(idx::ydot, idx::p0x) = -inv;

  Matrix fy = Matrix::Zero(kFullDim, kFullDim);
  fy(idx::x, idx::ydot) = 1.0;
  fy(idx::y, idx::xdot) = -1.0;
  fy(idx::xdot, idx::p0x) = inv;
  fy(idx::ydot, idx::p0y) = inv;

  Matrix fc = Matrix::Zero(kFullDim, kFullDim);
  fc(idx::x, idx::p0x) = 2.0 * inv;
  fc(idx::y, idx::p0y) = 2.0 * inv;

  return {affine_field("F_R", with_p1(fr), zero), affine_field("F_X", with_p1(fx), zero),
          affine_field("F_Y", with_p1(fy), zero), affine_field("F_lsq/lambda", with_p1(fc), zero)};
}

// ---------------------------------------------------------------------------
// Darboux chart and inverse Legendre map

/// w(z) = (x, y, q, p0, p) + (phi_x, phi_y) with q = sqrt(lambda) ydot,
/// p = -sqrt(lambda) xdot. A bijection of T*TM; needs lambda > 0.
inline DarbouxState darboux_forward(const FullState& z, const Params& params) {
  const double s = sqrt_lambda(params);
  return {z.pos, s * z.vel.y, z.p0, -s * z.vel.x, constraint_values(z, params)};
}

inline FullState darboux_inverse(const DarbouxState& w, const Params& params) {
  const double s = sqrt_lambda(params);
  const Vec2 vel{-w.p / s, w.q / s};
  return {w.pos, vel, w.p0, constrained_p1(vel, params) + w.phi};
}

/// Jacobian dw/dz of darboux_forward (constant), rows ordered
/// (x, y, q, p0x, p0y, p, phi_x, phi_y).
inline Matrix darboux_jacobian(const Params& params) {
  const double s = sqrt_lambda(params), lam = params.lambda();
  Matrix j = Matrix::Zero(kFullDim, kFullDim);
  j(0, idx::x) = 1.0;
  j(1, idx::y) = 1.0;
  j(2, idx::ydot) = s;
  j(3, idx::p0x) = 1.0;
  j(4, idx::p0y) = 1.0;
  j(5, idx::xdot) = -s;
  j(6, idx::p1x) = 1.0;
  j(6, idx::ydot) = -0.5 * lam;
  j(7, idx::p1y) = 1.0;
  j(7, idx::xdot) = 0.5 * lam;
  return j;
}

struct LegendreVelocity {
  Vec2 vel;
  double qdot = 0.0;
};

/// xdot = -p/sqrt(lambda), ydot = q/sqrt(lambda), qdot = -p0x/sqrt(lambda) - (m/lambda) p.
inline LegendreVelocity inverse_legendre(const DarbouxState& w, const Params& params) {
  const double s = sqrt_lambda(params);
  return {{-w.p / s, w.q / s}, -w.p0.x / s - params.frequency() * w.p};
}

}  // namespace chiral
