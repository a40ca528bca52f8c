#pragma once

#include "chiral/core.hpp"
#include "chiral/fields.hpp"

namespace chiral {

/// Third jet of a plane curve at one instant.
struct Jet {
  Vec2 pos;
  Vec2 vel;
  Vec2 acc;
  Vec2 jerk;
};

/// L = -(lambda/2)(xdot*yddot - ydot*xddot) + (m/2)|xdot|^2.
inline double lagrangian(Vec2 vel, Vec2 acc, const Params& params) {
  return -0.5 * params.lambda() * cross(vel, acc) + 0.5 * params.mass() * norm_sq(vel);
}

/// Energy E_L = -lambda (xdot*yddot - ydot*xddot) + (m/2)|xdot|^2.
inline double lagrangian_energy(Vec2 vel, Vec2 acc, const Params& params) {
  return -params.lambda() * cross(vel, acc) + 0.5 * params.mass() * norm_sq(vel);
}

/// Euler-Lagrange residuals (lambda y''' - m x'', -lambda x''' - m y'').
inline Vec2 el_residual(const Jet& jet, const Params& params) {
  const double lam = params.lambda(), m = params.mass();
  return {lam * jet.jerk.y - m * jet.acc.x, -lam * jet.jerk.x - m * jet.acc.y};
}

// ---------------------------------------------------------------------------
// Full-space Hamiltonians

/// H^C = xdot . p0 - (m/2)|xdot|^2.
inline double h_canonical(const FullState& z, const Params& params) {
  return dot(z.vel, z.p0) - 0.5 * params.mass() * norm_sq(z.vel);
}

inline Vector h_canonical_gradient(const FullState& z, const Params& params) {
  const double m = params.mass();
  Vector g = Vector::Zero(kFullDim);
  g[idx::xdot] = z.p0.x - m * z.vel.x;
  g[idx::ydot] = z.p0.y - m * z.vel.y;
  g[idx::p0x] = z.vel.x;
  g[idx::p0y] = z.vel.y;
  return g;
}

/// Total Hamiltonian H^D = (1/2) xdot.p0 + (m/lambda) xdot x p1 - (1/lambda) p0 x p1.
inline double h_dirac(const FullState& z, const Params& params) {
  const double lam = params.lambda(), m = params.mass();
  return 0.5 * dot(z.vel, z.p0) + (m / lam) * cross(z.vel, z.p1) - cross(z.p0, z.p1) / lam;
}

inline Vector h_dirac_gradient(const FullState& z, const Params& params) {
  const double lam = params.lambda(), k = params.mass() / lam;
  Vector g(kFullDim);
  g[idx::x] = 0.0;
  g[idx::y] = 0.0;
  g[idx::xdot] = 0.5 * z.p0.x + k * z.p1.y;
  g[idx::ydot] = 0.5 * z.p0.y - k * z.p1.x;
  g[idx::p0x] = 0.5 * z.vel.x - z.p1.y / lam;
  g[idx::p0y] = 0.5 * z.vel.y + z.p1.x / lam;
  g[idx::p1x] = -k * z.vel.y + z.p0.y / lam;
  g[idx::p1y] = k * z.vel.x - z.p0.x / lam;
  return g;
}

inline ScalarField h_canonical_field(const Params& params) {
  return {"H_canonical", kFullDim, [params](const Vector& z) { return h_canonical(unflatten(z), params); },
          [params](const Vector& z) { return h_canonical_gradient(unflatten(z), params); }};
}

inline ScalarField h_dirac_field(const Params& params) {
  return {"H_dirac", kFullDim, [params](const Vector& z) { return h_dirac(unflatten(z), params); },
          [params](const Vector& z) { return h_dirac_gradient(unflatten(z), params); }};
}

// ---------------------------------------------------------------------------
// Darboux chart

/// H_f = (q p0y - p p0x)/sqrt(lambda) - (m/(2 lambda))(q^2 + p^2). Needs lambda > 0.
inline double h_final(const DarbouxState& w, const Params& params) {
  const double s = sqrt_lambda(params);
  return (w.q * w.p0.y - w.p * w.p0.x) / s - 0.5 * params.mass() / params.lambda() * (w.q * w.q + w.p * w.p);
}

inline Vector h_final_gradient(const DarbouxState& w, const Params& params) {
  const double s = sqrt_lambda(params);
  const double k = params.mass() / params.lambda();
  Vector g(kDarbouxDim);
  g << 0.0, 0.0, w.p0.y / s - k * w.q, -w.p / s, w.q / s, -w.p0.x / s - k * w.p;
  return g;
}

inline ScalarField h_final_field(const Params& params) {
  sqrt_lambda(params);
  return {"H_final", kDarbouxDim, [params](const Vector& w) { return h_final(unflatten_darboux(w), params); },
          [params](const Vector& w) { return h_final_gradient(unflatten_darboux(w), params); }};
}

// ---------------------------------------------------------------------------
// Reduced space

/// H_red^D = (m/lambda) J_R + J_X.
inline double h_reduced_dirac(const ReducedState& s, const Params& params) {
  return params.frequency() * s.jr + s.jx;
}

/// H_red^C = (m/lambda) J_R^D + J_X^D; same formula, evaluated on the Dirac triple.
inline double h_reduced_canonical(const ReducedState& s, const Params& params) {
  return h_reduced_dirac(s, params);
}

inline ScalarField h_reduced_field(const Params& params) {
  const double k = params.frequency();
  return {"H_reduced", kReducedDim, [k](const Vector& s) { return k * s[0] + s[1]; },
          [k](const Vector&) -> Vector {
            Vector g(kReducedDim);
            g << k, 1.0, 0.0, 0.0;
            return g;
          }};
}

/// l^2 = |p0|^2, the se(2)* Casimir.
constexpr double casimir_lsq(Vec2 p0) { return norm_sq(p0); }

inline ScalarField lsq_field_full() {
  return {"lsq", kFullDim, [](const Vector& z) { return z[idx::p0x] * z[idx::p0x] + z[idx::p0y] * z[idx::p0y]; },
          [](const Vector& z) -> Vector {
            Vector g = Vector::Zero(kFullDim);
            g[idx::p0x] = 2.0 * z[idx::p0x];
            g[idx::p0y] = 2.0 * z[idx::p0y];
            return g;
          }};
}

/// l^2 on se(2)* coordinates (mu, p0x, p0y).
inline ScalarField lsq_field_se2() {
  return {"lsq", 3, [](const Vector& v) { return v[1] * v[1] + v[2] * v[2]; },
          [](const Vector& v) -> Vector {
            Vector g(3);
            g << 0.0, 2.0 * v[1], 2.0 * v[2];
            return g;
          }};
}

/// l^2 as the fourth reduced coordinate.
inline ScalarField lsq_field_reduced() {
  return {"lsq", kReducedDim, [](const Vector& s) { return s[3]; },
          [](const Vector&) -> Vector {
            Vector g(kReducedDim);
            g << 0.0, 0.0, 0.0, 1.0;
            return g;
          }};
}

/// (J_X - l^2/m)^2 + J_Y^2: conserved by the reduced flow, level sets are
/// cylinders around the J_R axis.
inline double casimir_cylinder(const ReducedState& s, const Params& params) {
  const double u = s.jx - s.lsq / params.mass();
  return u * u + s.jy * s.jy;
}

inline ScalarField cylinder_field(const Params& params) {
  const double m = params.mass();
  return {"cylinder", kReducedDim,
          [params](const Vector& s) { return casimir_cylinder(unflatten_reduced(s), params); },
          [m](const Vector& s) -> Vector {
            const double u = s[1] - s[3] / m;
            Vector g(kReducedDim);
            g << 0.0, 2.0 * u, 2.0 * s[2], -2.0 * u / m;
            return g;
          }};
}

/// J_X^2 - 2 m l^2 J_X + J_Y^2 as printed for the 3D reduced flow. Not
/// conserved unless m^2 = 1; kept only as a negative control.
inline double printed_casimir_c(const ReducedState& s, const Params& params) {
  return s.jx * s.jx - 2.0 * params.mass() * s.lsq * s.jx + s.jy * s.jy;
}

/// J_X^2 + J_Y^2 + (2 l^2/lambda) J_R; vanishes identically on the Dirac triple.
inline double paraboloid_residual(const ReducedState& s, const Params& params) {
  return s.jx * s.jx + s.jy * s.jy + 2.0 * s.lsq / params.lambda() * s.jr;
}

/// Paraboloid function on the (J_R, J_X, J_Y) block at fixed l^2.
inline ScalarField paraboloid_field_block(double lsq, const Params& params) {
  const double c = 2.0 * lsq / params.lambda();
  return {"paraboloid", 3, [c](const Vector& v) { return v[1] * v[1] + v[2] * v[2] + c * v[0]; },
          [c](const Vector& v) -> Vector {
            Vector g(3);
            g << c, 2.0 * v[1], 2.0 * v[2];
            return g;
          }};
}

inline ScalarField cylinder_field_block(double lsq, const Params& params) {
  const double center = lsq / params.mass();
  return {"cylinder", 3,
          [center](const Vector& v) { return (v[1] - center) * (v[1] - center) + v[2] * v[2]; },
          [center](const Vector& v) -> Vector {
            Vector g(3);
            g << 0.0, 2.0 * (v[1] - center), 2.0 * v[2];
            return g;
          }};
}

inline ScalarField h_reduced_field_block(const Params& params) {
  const double k = params.frequency();
  return {"H_reduced", 3, [k](const Vector& v) { return k * v[0] + v[1]; },
          [k](const Vector&) -> Vector {
            Vector g(3);
            g << k, 1.0, 0.0;
            return g;
          }};
}

/// Reduced Hamiltonian restricted to a coadjoint orbit:
/// H_O = -(m/(2 l^2))(J_X^2 + J_Y^2) + J_X.
inline double h_orbit(double jx, double jy, double lsq, const Params& params) {
  if (!(lsq > 0.0)) throw Error(ErrorCode::ZeroMomentum, "h_orbit needs l^2 > 0");
  return -0.5 * params.mass() / lsq * (jx * jx + jy * jy) + jx;
}

}  // namespace chiral
