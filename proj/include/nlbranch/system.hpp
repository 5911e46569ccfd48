// The discrete solution operators: S(U) inverts the Laplacian against the
// coupling A*U, G(U) inverts it against -Phi_U, and the fixed-point residual
// U - t*S(U) - G(U) vanishes exactly on discrete weak solutions.
#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Core>

#include "nlbranch/coupling.hpp"
#include "nlbranch/errors.hpp"
#include "nlbranch/grid.hpp"
#include "nlbranch/laplacian.hpp"
#include "nlbranch/nonlocal.hpp"
#include "nlbranch/state.hpp"

namespace nlbranch {

class SystemOperators {
 public:
  SystemOperators(const Grid& grid, const CouplingMatrix& coupling, NonlocalTerm f_term,
                  NonlocalTerm g_term)
      : lap_(assemble_laplacian(grid)),
        solver_(lap_.matrix),
        coupling_(coupling),
        f_term_(std::move(f_term)),
        g_term_(std::move(g_term)) {
    if (f_term_.size() != grid.node_count() || g_term_.size() != grid.node_count())
      throw ConfigError("SystemOperators: nonlocal terms do not match the grid");
  }

  const Grid& grid() const { return lap_.grid; }
  const DirichletOperator& laplacian() const { return lap_; }
  const CouplingMatrix& coupling() const { return coupling_; }
  const NonlocalTerm& f_term() const { return f_term_; }
  const NonlocalTerm& g_term() const { return g_term_; }

  Eigen::VectorXd poisson_solve(const Eigen::VectorXd& rhs) const { return solver_.solve(rhs); }

  // S(U): componentwise Poisson solves of -Lap u1 = a*u + b*v, -Lap v1 = c*u + d*v.
  StateField apply_S(const StateField& U) const {
    check(U);
    StateField out;
    out.u = solver_.solve(coupling_.a * U.u + coupling_.b * U.v);
    out.v = solver_.solve(coupling_.c * U.u + coupling_.d * U.v);
    return out;
  }

  // G(U): -Lap U1 + Phi_U = 0, so U1 = -Lap^{-1} Phi_U componentwise.
  StateField apply_G(const StateField& U) const {
    check(U);
    const StateField phi = eval_Phi(f_term_, g_term_, U);
    StateField out;
    out.u = solver_.solve(-phi.u);
    out.v = solver_.solve(-phi.v);
    return out;
  }

  // U - t*S(U) - G(U); zero exactly on solutions of the t-parameterized problem.
  StateField residual(double t, const StateField& U) const {
    if (!(t >= 0.0)) throw ConfigError("residual: need t >= 0");
    const StateField s = apply_S(U);
    const StateField g = apply_G(U);
    return {U.u - t * s.u - g.u, U.v - t * s.v - g.v};
  }

 private:
  void check(const StateField& U) const {
    if (U.size() != lap_.grid.node_count())
      throw ConfigError("state field does not match the grid");
  }

  DirichletOperator lap_;
  SparseSolver solver_;
  CouplingMatrix coupling_;
  NonlocalTerm f_term_;
  NonlocalTerm g_term_;
};

}  // namespace nlbranch
