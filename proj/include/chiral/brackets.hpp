#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chiral/core.hpp"
#include "chiral/fields.hpp"

namespace chiral {

/// A Poisson bivector on R^dim in coordinates: matrix_fn(z)(i, j) = {z_i, z_j}.
///
/// `derivative_fn(z)[l]` is d matrix / d z_l. It is supplied for every
/// structure built here (they are constant or linear); when absent the
/// Jacobi checker differentiates `matrix_fn` numerically.
struct PoissonStructure {
  std::string name;
  int dim = 0;
  std::vector<std::string> labels;
  std::function<Matrix(const Vector&)> matrix_fn;
  std::function<std::vector<Matrix>(const Vector&)> derivative_fn;

  Matrix operator()(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    return matrix_fn(z);
  }

  std::vector<Matrix> derivative(const Vector& z) const {
    require_dim(z.size(), dim, name.c_str());
    if (derivative_fn) return derivative_fn(z);
    std::vector<Matrix> d(dim);
    Vector zp = z;
    for (int l = 0; l < dim; ++l) {
      const double h = fd_step(z[l]);
      zp[l] = z[l] + h;
      const Matrix plus = matrix_fn(zp);
      zp[l] = z[l] - h;
      const Matrix minus = matrix_fn(zp);
      zp[l] = z[l];
      d[l] = (plus - minus) / (2.0 * h);
    }
    return d;
  }

  /// Index of a coordinate label; throws DimensionMismatch if unknown.
  int index_of(const std::string& label) const {
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
      if (labels[i] == label) return i;
    }
    throw Error(ErrorCode::DimensionMismatch, name + ": no coordinate named " + label);
  }
};

template <std::size_t N>
std::vector<std::string> label_list(const std::array<const char*, N>& labels) {
  return {labels.begin(), labels.end()};
}

inline PoissonStructure constant_structure(std::string name, std::vector<std::string> labels, Matrix m) {
  const int dim = static_cast<int>(m.rows());
  return {std::move(name), dim, std::move(labels), [m](const Vector&) -> Matrix { return m; },
          [dim](const Vector&) { return std::vector<Matrix>(dim, Matrix::Zero(dim, dim)); }};
}

/// Canonical structure on T*TM: {x,p0x} = {y,p0y} = {xdot,p1x} = {ydot,p1y} = 1.
inline PoissonStructure canonical_bracket() {
  Matrix m = Matrix::Zero(kFullDim, kFullDim);
  m.topRightCorner(4, 4) = Matrix::Identity(4, 4);
  m.bottomLeftCorner(4, 4) = -Matrix::Identity(4, 4);
  return constant_structure("canonical", label_list(kFullLabels), m);
}

/// Scalar functions with analytic gradients whose common zero set is the
/// constraint submanifold.
struct ConstraintSet {
  std::vector<ScalarField> constraints;
};

/// phi_x = p1x - lambda*ydot/2, phi_y = p1y + lambda*xdot/2.
inline ConstraintSet chiral_constraints(const Params& params) {
  const double lam = params.lambda();
  ScalarField phi_x{"phi_x", kFullDim,
                    [lam](const Vector& z) { return z[idx::p1x] - 0.5 * lam * z[idx::ydot]; },
                    [lam](const Vector&) -> Vector {
                      Vector g = Vector::Zero(kFullDim);
                      g[idx::ydot] = -0.5 * lam;
                      g[idx::p1x] = 1.0;
                      return g;
                    }};
  ScalarField phi_y{"phi_y", kFullDim,
                    [lam](const Vector& z) { return z[idx::p1y] + 0.5 * lam * z[idx::xdot]; },
                    [lam](const Vector&) -> Vector {
                      Vector g = Vector::Zero(kFullDim);
                      g[idx::xdot] = 0.5 * lam;
                      g[idx::p1y] = 1.0;
                      return g;
                    }};
  return {{std::move(phi_x), std::move(phi_y)}};
}

/// Constraint Gram matrix C_ab = {phi_a, phi_b} under `base` at z.
inline Matrix gram_matrix(const PoissonStructure& base, const ConstraintSet& cs, const Vector& z) {
  const Matrix p = base(z);
  const auto n = static_cast<Eigen::Index>(cs.constraints.size());
  Matrix grads(base.dim, n);
  for (Eigen::Index a = 0; a < n; ++a) grads.col(a) = cs.constraints[a].gradient(z);
  return grads.transpose() * p * grads;
}

/// Dirac matrix {f,g}_D = {f,g} - {f,phi_a} (C^-1)^ab {phi_b,g} at z.
inline Matrix dirac_bracket_from_constraints(const PoissonStructure& base, const ConstraintSet& cs,
                                             const Vector& z) {
  const Matrix p = base(z);
  const auto n = static_cast<Eigen::Index>(cs.constraints.size());
  Matrix grads(base.dim, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    require_dim(cs.constraints[a].dim, base.dim, "dirac_bracket_from_constraints");
    grads.col(a) = cs.constraints[a].gradient(z);
  }
  const Matrix gram = grads.transpose() * p * grads;
  if (n == 0 || std::abs(gram.determinant()) < 1e-12) {
    throw Error(ErrorCode::SingularGramMatrix, "constraints are not second class at this point");
  }
  const Matrix pg = p * grads;                 // column a: {z_i, phi_a}
  const Matrix gp = grads.transpose() * p;     // row b: {phi_b, z_j}
  return p - pg * gram.inverse() * gp;
}

/// Dirac structure evaluated by the generic constructor at every point.
inline PoissonStructure dirac_bracket_constructed(const Params& params) {
  PoissonStructure base = canonical_bracket();
  ConstraintSet cs = chiral_constraints(params);
  PoissonStructure out;
  out.name = "dirac_constructed";
  out.dim = kFullDim;
  out.labels = base.labels;
  out.matrix_fn = [base, cs](const Vector& z) { return dirac_bracket_from_constraints(base, cs, z); };
  return out;
}

/// The Dirac bracket table: {x,p0x} = {y,p0y} = 1, {xdot,ydot} = 1/lambda,
/// {xdot,p1x} = {ydot,p1y} = 1/2, {p1x,p1y} = lambda/4; everything else 0.
inline PoissonStructure dirac_bracket_closed_form(const Params& params) {
  const double lam = params.lambda();
  Matrix m = Matrix::Zero(kFullDim, kFullDim);
  auto set = [&m](int i, int j, double v) {
    m(i, j) = v;
    m(j, i) = -v;
  };
  set(idx::x, idx::p0x, 1.0);
  set(idx::y, idx::p0y, 1.0);
  set(idx::xdot, idx::ydot, 1.0 / lam);
  set(idx::xdot, idx::p1x, 0.5);
  set(idx::ydot, idx::p1y, 0.5);
  set(idx::p1x, idx::p1y, lam / 4.0);
  return constant_structure("dirac", label_list(kFullLabels), m);
}

enum class FinalChart {
  Darboux,   ///< (x, y, q, p0x, p0y, p)
  Velocity,  ///< (x, y, xdot, p0x, p0y, ydot)
};

/// Bracket on the 6-dimensional final constrained submanifold.
inline PoissonStructure final_bracket(const Params& params, FinalChart chart = FinalChart::Darboux) {
  Matrix m = Matrix::Zero(kDarbouxDim, kDarbouxDim);
  const double qp = chart == FinalChart::Darboux ? 1.0 : 1.0 / params.lambda();
  m(0, 3) = 1.0;
  m(1, 4) = 1.0;
  m(2, 5) = qp;
  m(3, 0) = -1.0;
  m(4, 1) = -1.0;
  m(5, 2) = -qp;
  if (chart == FinalChart::Darboux) {
    return constant_structure("final", label_list(kDarbouxLabels), m);
  }
  return constant_structure("final_velocity_chart", {"x", "y", "xdot", "p0x", "p0y", "ydot"}, m);
}

/// se(2)* Lie-Poisson matrix in coordinates (mu, p0x, p0y).
inline Matrix se2_lie_poisson(const Vector& mu_p) {
  require_dim(mu_p.size(), 3, "se2_lie_poisson");
  const double px = mu_p[1], py = mu_p[2];
  Matrix m(3, 3);
  m << 0.0, -py, px,  //
      py, 0.0, 0.0,   //
      -px, 0.0, 0.0;
  return m;
}

inline PoissonStructure se2_structure() {
  PoissonStructure s;
  s.name = "se2_lie_poisson";
  s.dim = 3;
  s.labels = {"mu", "p0x", "p0y"};
  s.matrix_fn = [](const Vector& z) { return se2_lie_poisson(z); };
  s.derivative_fn = [](const Vector&) {
    std::vector<Matrix> d(3, Matrix::Zero(3, 3));
    d[1](0, 2) = 1.0;
    d[1](2, 0) = -1.0;
    d[2](0, 1) = -1.0;
    d[2](1, 0) = 1.0;
    return d;
  };
  return s;
}

/// osc* Lie-Poisson matrix in (J_R, J_X, J_Y, l^2):
/// {J_R,J_X} = J_Y, {J_R,J_Y} = -J_X, {J_X,J_Y} = l^2/lambda, l^2 central.
inline Matrix osc_lie_poisson(const ReducedState& s, const Params& params) {
  const double c = s.lsq / params.lambda();
  Matrix m(4, 4);
  m << 0.0, s.jy, -s.jx, 0.0,  //
      -s.jy, 0.0, c, 0.0,      //
      s.jx, -c, 0.0, 0.0,      //
      0.0, 0.0, 0.0, 0.0;
  return m;
}

inline PoissonStructure osc_structure(const Params& params) {
  const double lam = params.lambda();
  PoissonStructure s;
  s.name = "osc_lie_poisson";
  s.dim = kReducedDim;
  s.labels = label_list(kReducedLabels);
  s.matrix_fn = [params](const Vector& z) { return osc_lie_poisson(unflatten_reduced(z), params); };
  s.derivative_fn = [lam](const Vector&) {
    std::vector<Matrix> d(4, Matrix::Zero(4, 4));
    d[1](0, 2) = -1.0;
    d[1](2, 0) = 1.0;
    d[2](0, 1) = 1.0;
    d[2](1, 0) = -1.0;
    d[3](1, 2) = 1.0 / lam;
    d[3](2, 1) = -1.0 / lam;
    return d;
  };
  return s;
}

/// The (J_R, J_X, J_Y) block of osc* on a fixed level of l^2.
inline PoissonStructure osc_block_structure(double lsq, const Params& params) {
  const double c = lsq / params.lambda();
  PoissonStructure s;
  s.name = "osc_block";
  s.dim = 3;
  s.labels = {"JR", "JX", "JY"};
  s.matrix_fn = [c](const Vector& z) -> Matrix {
    Matrix m(3, 3);
    m << 0.0, z[2], -z[1],  //
        -z[2], 0.0, c,      //
        z[1], -c, 0.0;
    return m;
  };
  s.derivative_fn = [](const Vector&) {
    std::vector<Matrix> d(3, Matrix::Zero(3, 3));
    d[1](0, 2) = -1.0;
    d[1](2, 0) = 1.0;
    d[2](0, 1) = 1.0;
    d[2](1, 0) = -1.0;
    return d;
  };
  return s;
}

/// Negative control: osc* with {J_R,J_X} = J_X*J_Y instead of J_Y.
/// Still antisymmetric, but the Jacobi sum for (J_R,J_X,J_Y) is (l^2/lambda)*J_Y.
inline PoissonStructure corrupted_osc_structure(const Params& params) {
  PoissonStructure s;
  s.name = "osc_corrupted";
  s.dim = kReducedDim;
  s.labels = label_list(kReducedLabels);
  s.matrix_fn = [params](const Vector& z) {
    Matrix m = osc_lie_poisson(unflatten_reduced(z), params);
    m(0, 1) = z[1] * z[2];
    m(1, 0) = -m(0, 1);
    return m;
  };
  return s;
}

/// T*M with symplectic form dp0 ^ dx, i.e. {p0x, x} = {p0y, y} = 1, in (x, y, p0x, p0y).
inline PoissonStructure cotangent_plane_bracket() {
  Matrix m = Matrix::Zero(4, 4);
  m(2, 0) = 1.0;
  m(3, 1) = 1.0;
  m(0, 2) = -1.0;
  m(1, 3) = -1.0;
  return constant_structure("cotangent_plane", {"x", "y", "p0x", "p0y"}, m);
}

/// (R^2, dx ^ dy): {x, y} = 1.
inline PoissonStructure plane_bracket() {
  Matrix m(2, 2);
  m << 0.0, 1.0, -1.0, 0.0;
  return constant_structure("plane", {"x", "y"}, m);
}

/// {f, g}(z) = grad f^T P(z) grad g.
inline double bracket_of_functions(const PoissonStructure& p, const ScalarField& f, const ScalarField& g,
                                   const Vector& z) {
  require_dim(f.dim, p.dim, "bracket_of_functions (f)");
  require_dim(g.dim, p.dim, "bracket_of_functions (g)");
  return f.gradient(z).dot(p(z) * g.gradient(z));
}

/// Hamiltonian vector field value P(z) grad h.
inline Vector hamiltonian_vector(const PoissonStructure& p, const ScalarField& h, const Vector& z) {
  require_dim(h.dim, p.dim, "hamiltonian_vector");
  return p(z) * h.gradient(z);
}

inline double check_antisymmetry(const PoissonStructure& p, const Vector& z) {
  const Matrix m = p(z);
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

/// Max over index triples of |sum_l P_li dP_jk/dz_l + P_lj dP_ki/dz_l + P_lk dP_ij/dz_l|.
inline double check_jacobi(const PoissonStructure& p, const Vector& z) {
  const Matrix m = p(z);
  const std::vector<Matrix> d = p.derivative(z);
  const int n = p.dim;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) {
          sum += m(l, i) * d[l](j, k) + m(l, j) * d[l](k, i) + m(l, k) * d[l](i, j);
        }
        worst = std::max(worst, std::abs(sum));
      }
    }
  }
  return worst;
}

/// |P(z) grad c|_inf; zero iff c is a Casimir at z.
inline double check_casimir(const PoissonStructure& p, const ScalarField& c, const Vector& z) {
  require_dim(c.dim, p.dim, "check_casimir");
  return max_abs(p(z) * c.gradient(z));
}

}  // namespace chiral
