#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chiral {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidParams,
  SingularGramMatrix,
  DimensionMismatch,
  NegativeLambda,
  ZeroMomentum,
  NonConvergence,
  MomentumMismatch,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SingularGramMatrix: return "SingularGramMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeLambda: return "NegativeLambda";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::MomentumMismatch: return "MomentumMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* where) {
  if (got != want) {
    throw Error(ErrorCode::DimensionMismatch, std::string(where) + ": expected dimension " +
                                                  std::to_string(want) + ", got " + std::to_string(got));
  }
}

/// Physical constants of the chiral oscillator: chirality `lambda` and mass.
/// Both must be nonzero and finite; checked once here so downstream code can divide freely.
class Params {
 public:
  Params(double lambda, double mass) : lambda_(lambda), mass_(mass) {
    if (!std::isfinite(lambda) || lambda == 0.0) {
      throw Error(ErrorCode::InvalidParams, "lambda must be finite and nonzero");
    }
    if (!std::isfinite(mass) || mass == 0.0) {
      throw Error(ErrorCode::InvalidParams, "mass must be finite and nonzero");
    }
  }

  double lambda() const noexcept { return lambda_; }
  double mass() const noexcept { return mass_; }
  /// Oscillation frequency m/lambda of the reduced flow.
  double frequency() const noexcept { return mass_ / lambda_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  double lambda_;
  double mass_;
};

/// sqrt(lambda) for the Darboux chart; throws NegativeLambda when lambda <= 0.
inline double sqrt_lambda(const Params& params) {
  if (params.lambda() <= 0.0) {
    throw Error(ErrorCode::NegativeLambda, "Darboux coordinates need lambda > 0");
  }
  return std::sqrt(params.lambda());
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// Scalar 2D cross product a.x*b.y - a.y*b.x.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }

/// Point of the 8-dimensional Ostrogradskii phase space T*TM.
///
/// Flattened order is (x, y, xdot, ydot, p0x, p0y, p1x, p1y); every matrix,
/// gradient and CSV column in the library uses this order.
struct FullState {
  Vec2 pos;
  Vec2 vel;
  Vec2 p0;
  Vec2 p1;

  friend bool operator==(const FullState&, const FullState&) = default;
};

namespace idx {
inline constexpr int x = 0, y = 1, xdot = 2, ydot = 3, p0x = 4, p0y = 5, p1x = 6, p1y = 7;
}  // namespace idx

inline constexpr int kFullDim = 8;
inline constexpr int kDarbouxDim = 6;
inline constexpr int kReducedDim = 4;

inline constexpr std::array<const char*, kFullDim> kFullLabels = {"x",   "y",   "xdot", "ydot",
                                                                  "p0x", "p0y", "p1x",  "p1y"};
inline constexpr std::array<const char*, kDarbouxDim> kDarbouxLabels = {"x", "y", "q", "p0x", "p0y", "p"};
inline constexpr std::array<const char*, kReducedDim> kReducedLabels = {"JR", "JX", "JY", "lsq"};

inline Vector flatten(const FullState& z) {
  Vector v(kFullDim);
  v << z.pos.x, z.pos.y, z.vel.x, z.vel.y, z.p0.x, z.p0.y, z.p1.x, z.p1.y;
  return v;
}

inline FullState unflatten(const Vector& v) {
  require_dim(v.size(), kFullDim, "unflatten");
  return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

/// Six Darboux coordinates (x, y, q, p0, p) of the final constrained submanifold
/// plus the two constraint values, so the chart covers all of T*TM.
struct DarbouxState {
  Vec2 pos;
  double q = 0.0;
  Vec2 p0;
  double p = 0.0;
  Vec2 phi;

  friend bool operator==(const DarbouxState&, const DarbouxState&) = default;
};

/// Canonical part (x, y, q, p0x, p0y, p); phi is dropped.
inline Vector flatten(const DarbouxState& w) {
  Vector v(kDarbouxDim);
  v << w.pos.x, w.pos.y, w.q, w.p0.x, w.p0.y, w.p;
  return v;
}

inline DarbouxState unflatten_darboux(const Vector& v) {
  require_dim(v.size(), kDarbouxDim, "unflatten_darboux");
  return {{v[0], v[1]}, v[2], {v[3], v[4]}, v[5], {0.0, 0.0}};
}

/// Coordinates (J_R, J_X, J_Y, l^2) on the dual oscillator algebra.
struct ReducedState {
  double jr = 0.0;
  double jx = 0.0;
  double jy = 0.0;
  double lsq = 0.0;

  friend bool operator==(const ReducedState&, const ReducedState&) = default;
};

inline Vector flatten(const ReducedState& s) {
  Vector v(kReducedDim);
  v << s.jr, s.jx, s.jy, s.lsq;
  return v;
}

inline ReducedState unflatten_reduced(const Vector& v) {
  require_dim(v.size(), kReducedDim, "unflatten_reduced");
  return {v[0], v[1], v[2], v[3]};
}

/// Points of the constraint surface phi = 0: p1 = (lambda*ydot/2, -lambda*xdot/2).
inline Vec2 constrained_p1(Vec2 vel, const Params& params) {
  return {0.5 * params.lambda() * vel.y, -0.5 * params.lambda() * vel.x};
}

inline FullState on_surface(Vec2 pos, Vec2 vel, Vec2 p0, const Params& params) {
  return {pos, vel, p0, constrained_p1(vel, params)};
}

/// Second-class constraint values (phi_x, phi_y).
inline Vec2 constraint_values(const FullState& z, const Params& params) {
  return {z.p1.x - 0.5 * params.lambda() * z.vel.y, z.p1.y + 0.5 * params.lambda() * z.vel.x};
}

inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace chiral
