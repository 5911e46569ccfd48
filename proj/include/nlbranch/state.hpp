// The two-component state U = (u, v) on a shared grid, with the sup norm of
// the continuous-function pair space and the discrete H1 norm.
#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "nlbranch/errors.hpp"
#include "nlbranch/laplacian.hpp"

namespace nlbranch {

struct StateField {
  Eigen::VectorXd u, v;

  static StateField zero(int nodes) {
    return {Eigen::VectorXd::Zero(nodes), Eigen::VectorXd::Zero(nodes)};
  }
  static StateField constant(int nodes, double cu, double cv) {
    return {Eigen::VectorXd::Constant(nodes, cu), Eigen::VectorXd::Constant(nodes, cv)};
  }

  int size() const { return static_cast<int>(u.size()); }

  // ||U|| = ||u||_inf + ||v||_inf, the norm of the pair space.
  double sup_norm() const {
    return u.lpNorm<Eigen::Infinity>() + v.lpNorm<Eigen::Infinity>();
  }

  bool u_strictly_positive() const { return u.size() > 0 && u.minCoeff() > 0.0; }
  bool v_strictly_positive() const { return v.size() > 0 && v.minCoeff() > 0.0; }
  bool strictly_positive() const { return u_strictly_positive() && v_strictly_positive(); }
  bool strictly_negative() const {
    return u.size() > 0 && u.maxCoeff() < 0.0 && v.maxCoeff() < 0.0;
  }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd x(2 * u.size());
    x << u, v;
    return x;
  }
  static StateField from_stacked(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size()) / 2;
    return {x.head(n), x.tail(n)};
  }

  StateField operator+(const StateField& o) const { return {u + o.u, v + o.v}; }
  StateField operator-(const StateField& o) const { return {u - o.u, v - o.v}; }
  StateField operator-() const { return {-u, -v}; }
  friend StateField operator*(double s, const StateField& f) { return {s * f.u, s * f.v}; }
};

// Discrete H0^1 seminorm of one component: sqrt(h^d * <L x, x>) with L the
// stiffness matrix; this is the discrete form of (int |grad x|^2)^(1/2).
inline double h1_norm(const DirichletOperator& lap, const Eigen::VectorXd& x) {
  if (x.size() != lap.matrix.rows()) throw ConfigError("h1_norm: field/operator mismatch");
  const double q = x.dot(lap.matrix * x);
  return std::sqrt(std::max(q, 0.0) * lap.grid.cell_measure());
}

// ||U||_H = ||u||_{H1} + ||v||_{H1}.
inline double h_norm(const DirichletOperator& lap, const StateField& U) {
  return h1_norm(lap, U.u) + h1_norm(lap, U.v);
}

}  // namespace nlbranch
