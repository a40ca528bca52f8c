#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>

#include "chiral/core.hpp"

namespace chiral {

/// Central-difference step for coordinate i: 1e-6 * max(1, |z_i|).
inline double fd_step(double zi) { return 1e-6 * std::max(1.0, std::abs(zi)); }

/// Gradient of `f` by central differences.
template <class F>
Vector fd_gradient(F&& f, const Vector& z) {
  Vector g(z.size());
  Vector zp = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = fd_step(z[i]);
    zp[i] = z[i] + h;
    const double fp = f(zp);
    zp[i] = z[i] - h;
    const double fm = f(zp);
    zp[i] = z[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Jacobian (rows = outputs) of a vector map by central differences.
template <class F>
Matrix fd_jacobian(F&& f, const Vector& z) {
  const Vector f0 = f(z);
  Matrix jac(f0.size(), z.size());
  Vector zp = z;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double h = fd_step(z[j]);
    zp[j] = z[j] + h;
    const Vector fp = f(zp);
    zp[j] = z[j] - h;
    const Vector fm = f(zp);
    zp[j] = z[j];
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

/// Named scalar function on R^dim with an analytic gradient.
/// An empty `gradient_fn` means callers fall back to central differences.
struct ScalarField {
  std::string name;
  int dim = 0;
  std::function<double(const Vector&)> value_fn;
  std::function<Vector(const Vector&)> gradient_fn;

  double operator()(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    return value_fn(z);
  }

  Vector gradient(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    if (gradient_fn) return gradient_fn(z);
    return fd_gradient(value_fn, z);
  }
};

/// Named vector field on R^dim; `jacobian_fn` (d value_i / d z_j) is optional.
struct VectorField {
  std::string name;
  int dim = 0;
  std::function<Vector(const Vector&)> value_fn;
  std::function<Matrix(const Vector&)> jacobian_fn;

  Vector operator()(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    return value_fn(z);
  }

  Matrix jacobian(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    if (jacobian_fn) return jacobian_fn(z);
    return fd_jacobian(value_fn, z);
  }
};

/// Field with constant Jacobian: value(z) = A z + b.
inline VectorField affine_field(std::string name, Matrix a, Vector b) {
  const int dim = static_cast<int>(a.cols());
  return {std::move(name), dim, [a, b](const Vector& z) -> Vector { return a * z + b; },
          [a](const Vector&) -> Matrix { return a; }};
}

}  // namespace chiral
