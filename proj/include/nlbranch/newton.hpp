// Damped Newton iteration on the fixed-point residual with a forward
// finite-difference Jacobian. The crowding functions need not be
// differentiable at 0, so no analytic derivative is assumed anywhere.
#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "nlbranch/state.hpp"
#include "nlbranch/system.hpp"

namespace nlbranch {

enum class SolutionClass { Zero, PositiveSolution, SignChanging, NegativeSolution, Diverged };

inline const char* to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Zero: return "zero";
    case SolutionClass::PositiveSolution: return "positive";
    case SolutionClass::SignChanging: return "sign-changing";
    case SolutionClass::NegativeSolution: return "negative";
    case SolutionClass::Diverged: return "diverged";
  }
  return "?";
}

struct NewtonOptions {
  double tol = 1e-10;            // convergence: ||residual||_inf <= tol
  int max_iterations = 50;
  int max_halvings = 20;         // backtracking line search
  double zero_threshold = 1e-8;  // ||U||_inf <= thr*(1+||U0||_inf) classifies Zero
  std::function<void(const StateField&)> iterate_hook;  // diagnostics only
};

struct SolveOutcome {
  bool converged = false;
  StateField field;
  double residual_sup = std::numeric_limits<double>::infinity();
  int iterations = 0;
  SolutionClass classification = SolutionClass::Diverged;
};

namespace detail {

// Forward-difference Jacobian of the stacked residual map, step
// sqrt(machine eps) * (1 + ||U||_inf).
inline Eigen::MatrixXd fd_jacobian(const SystemOperators& sys, double t, const StateField& U,
                                   const Eigen::VectorXd& r0) {
  const int m = 2 * U.size();
  const double step =
      std::sqrt(std::numeric_limits<double>::epsilon()) * (1.0 + U.sup_norm());
  Eigen::MatrixXd jac(m, m);
  Eigen::VectorXd x = U.stacked();
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd xk = x;
    xk[k] += step;
    const Eigen::VectorXd rk = sys.residual(t, StateField::from_stacked(xk)).stacked();
    jac.col(k) = (rk - r0) / step;
  }
  return jac;
}

inline SolutionClass classify(const StateField& U, const StateField& U0, double zero_threshold) {
  if (U.sup_norm() <= zero_threshold * (1.0 + U0.sup_norm())) return SolutionClass::Zero;
  if (U.strictly_positive()) return SolutionClass::PositiveSolution;
  if (U.strictly_negative()) return SolutionClass::NegativeSolution;
  return SolutionClass::SignChanging;
}

}  // namespace detail

inline SolveOutcome newton_solve(const SystemOperators& sys, double t, const StateField& U0,
                                 const NewtonOptions& opts = {}) {
  if (!(t >= 0.0)) throw ConfigError("newton_solve: need t >= 0");

  StateField U = U0;
  Eigen::VectorXd r = sys.residual(t, U).stacked();
  double rn = r.lpNorm<Eigen::Infinity>();

  SolveOutcome out;
  for (int iter = 0; iter < opts.max_iterations && rn > opts.tol; ++iter) {
    const Eigen::MatrixXd jac = detail::fd_jacobian(sys, t, U, r);
    const Eigen::VectorXd step = jac.partialPivLu().solve(-r);
    if (!step.allFinite()) break;

    // Backtrack on sup-norm decrease; overshoot across the trivial solution
    // is the failure mode this guards near the bifurcation point.
    double alpha = 1.0;
    bool improved = false;
    StateField U_try;
    Eigen::VectorXd r_try;
    double rn_try = rn;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      U_try = StateField::from_stacked(U.stacked() + alpha * step);
      r_try = sys.residual(t, U_try).stacked();
      rn_try = r_try.lpNorm<Eigen::Infinity>();
      if (rn_try < rn) {
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;

    U = U_try;
    r = r_try;
    rn = rn_try;
    out.iterations = iter + 1;
    if (opts.iterate_hook) opts.iterate_hook(U);
  }

  out.field = U;
  out.residual_sup = rn;
  out.converged = rn <= opts.tol;
  out.classification = out.converged ? detail::classify(U, U0, opts.zero_threshold)
                                     : SolutionClass::Diverged;
  return out;
}

}  // namespace nlbranch
