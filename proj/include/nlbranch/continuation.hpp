// Seeding at the bifurcation point and pseudo-arclength continuation of the
// positive solution branch. The branch leaves (t1, 0) along (alpha*phi1,
// beta*phi1); natural-parameter continuation stalls at near-vertical
// amplitude growth, hence the arclength formulation.
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlbranch/coupling.hpp"
#include "nlbranch/newton.hpp"
#include "nlbranch/spectral.hpp"
#include "nlbranch/state.hpp"
#include "nlbranch/system.hpp"

namespace nlbranch {

// eps * (alpha*phi1, beta*phi1) with z = (alpha, beta) and phi1 both
// sup-normalized; the tangent direction of the branch at (t1, 0).
inline StateField seed_tangent(const CouplingSpectrum& cs, const DiscreteSpectrum& ds,
                               double eps) {
  if (!cs.z_strictly_positive) throw HypothesisError("z_strictly_positive");
  if (!(eps > 0.0)) throw ConfigError("seed_tangent: need eps > 0");
  const Eigen::Vector2d z = cs.z / cs.z.maxCoeff();
  Eigen::VectorXd phi = ds.vectors.col(0);
  phi /= phi.lpNorm<Eigen::Infinity>();
  return {eps * z[0] * phi, eps * z[1] * phi};
}

struct BranchPoint {
  double t = 0.0;
  StateField U;
  double amp_sup = 0.0;  // ||U||_inf (sum of component sup norms)
  double amp_h = 0.0;    // discrete H norm
  double min_u = 0.0, min_v = 0.0;
  bool u_positive = false, v_positive = false;
  double residual_sup = 0.0;
  int newton_iterations = 0;
  double step = 0.0;  // arclength distance from the previous point
  // Auxiliary-operator positivity recheck (TP2 scenarios), NaN when not run:
  // the solution must align with the positive principal direction of
  // L_h = -Lap + diag(phi) and satisfy t*lambda = lambda_1(L_h).
  double hopf_alignment = std::numeric_limits<double>::quiet_NaN();
  double hopf_eigen_gap = std::numeric_limits<double>::quiet_NaN();
};

enum class BranchTermination { ReachedTMax, StepFailure, PositivityLost, AmplitudeCap };

inline const char* to_string(BranchTermination t) {
  switch (t) {
    case BranchTermination::ReachedTMax: return "reached-t-max";
    case BranchTermination::StepFailure: return "step-failure";
    case BranchTermination::PositivityLost: return "positivity-lost";
    case BranchTermination::AmplitudeCap: return "amplitude-cap";
  }
  return "?";
}

struct Branch {
  double t1 = 0.0;
  double seed_amplitude = 0.0;
  std::vector<BranchPoint> points;  // points[0] is the start datum (t1, 0)
  BranchTermination termination = BranchTermination::StepFailure;
};

struct ContinuationOptions {
  double step = 0.05;
  double min_step = 1e-7;
  double max_step = 0.5;
  double t_max = 0.0;
  double amplitude_cap = 50.0;
  double delta0 = 0.01;     // first solve at t = t1*(1 + delta0)
  double seed_eps = 1e-2;   // seed amplitude for the first solve
  int corrector_max_iterations = 12;
  int max_points = 10000;   // hard cap on accepted points
  NewtonOptions newton;
  bool tp2_check = false;   // run the auxiliary-operator positivity recheck
};

// For f = g and K = Gamma the nonlocal coefficient is scalar and any
// solution solves L_h U = t A U with L_h = -Lap + diag(phi). The discrete
// analogue of the Hopf-type lemma then pins U to the principal direction:
// U parallel to (alpha*phi1(L), beta*phi1(L)) and t*lambda = lambda_1(L_h).
struct HopfCheck {
  double alignment = 0.0;   // cosine against the positive principal direction
  double eigen_gap = 0.0;   // |t*lambda - lambda_1(L)| / lambda_1(L)
  double lambda1_L = 0.0;
  bool pass = false;
};

inline HopfCheck hopf_positivity_check(const SystemOperators& sys, const CouplingSpectrum& cs,
                                       double t, const StateField& U) {
  const Eigen::VectorXd phi = sys.f_term().coefficient(U.u, U.v);
  const Eigen::SparseMatrix<double> L = operator_with_potential(sys.laplacian(), phi);
  const DiscreteSpectrum ls = discrete_spectrum(L, 1);

  HopfCheck hc;
  hc.lambda1_L = ls.values[0];
  hc.eigen_gap = std::abs(t * cs.lambda - ls.values[0]) / ls.values[0];
  Eigen::VectorXd dir(2 * U.size());
  dir << cs.z[0] * ls.vectors.col(0), cs.z[1] * ls.vectors.col(0);
  const Eigen::VectorXd x = U.stacked();
  hc.alignment = dir.dot(x) / (dir.norm() * x.norm());
  hc.pass = hc.alignment >= 1.0 - 1e-6 && hc.eigen_gap <= 1e-5;
  return hc;
}

namespace detail {

struct CorrectorResult {
  bool converged = false;
  StateField U;
  double t = 0.0;
  double residual_sup = 0.0;
  int iterations = 0;
};

// Newton on the bordered system: residual(t, U) = 0 together with the
// arclength constraint <X - X_k, d> = s in the stacked (U, t) space.
inline CorrectorResult arclength_corrector(const SystemOperators& sys,
                                           const Eigen::VectorXd& x_base, double t_base,
                                           const Eigen::VectorXd& dir_x, double dir_t,
                                           double s, Eigen::VectorXd x, double t,
                                           const NewtonOptions& newton, int max_iterations) {
  const int m = static_cast<int>(x.size());
  CorrectorResult res;

  auto eval = [&](const Eigen::VectorXd& xx, double tt, Eigen::VectorXd& r, double& c) {
    r = sys.residual(tt, StateField::from_stacked(xx)).stacked();
    c = dir_x.dot(xx - x_base) + dir_t * (tt - t_base) - s;
  };

  Eigen::VectorXd r;
  double cons = 0.0;
  eval(x, t, r, cons);

  for (int it = 0; it < max_iterations; ++it) {
    const double rn = r.lpNorm<Eigen::Infinity>();
    if (rn <= newton.tol && std::abs(cons) <= 1e-10 * (1.0 + std::abs(s))) {
      res.converged = true;
      break;
    }
    const StateField U = StateField::from_stacked(x);
    const Eigen::MatrixXd jac = fd_jacobian(sys, t, U, r);
    const Eigen::VectorXd dr_dt = -sys.apply_S(U).stacked();

    Eigen::MatrixXd ext(m + 1, m + 1);
    ext.topLeftCorner(m, m) = jac;
    ext.topRightCorner(m, 1) = dr_dt;
    ext.bottomLeftCorner(1, m) = dir_x.transpose();
    ext(m, m) = dir_t;

    Eigen::VectorXd rhs(m + 1);
    rhs << -r, -cons;
    const Eigen::VectorXd delta = ext.partialPivLu().solve(rhs);
    if (!delta.allFinite()) break;

    // Backtrack on the merit ||r||_inf + |constraint|.
    const double merit0 = rn + std::abs(cons);
    double alpha = 1.0;
    bool improved = false;
    for (int h = 0; h <= newton.max_halvings; ++h) {
      Eigen::VectorXd x_try = x + alpha * delta.head(m);
      double t_try = t + alpha * delta[m];
      if (t_try >= 0.0) {
        Eigen::VectorXd r_try;
        double c_try = 0.0;
        eval(x_try, t_try, r_try, c_try);
        if (r_try.lpNorm<Eigen::Infinity>() + std::abs(c_try) < merit0) {
          x = x_try;
          t = t_try;
          r = r_try;
          cons = c_try;
          improved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    res.iterations = it + 1;
    if (!improved) break;
  }

  res.U = StateField::from_stacked(x);
  res.t = t;
  res.residual_sup = r.lpNorm<Eigen::Infinity>();
  res.converged = res.converged ||
                  (res.residual_sup <= newton.tol &&
                   std::abs(cons) <= 1e-10 * (1.0 + std::abs(s)));
  return res;
}

inline BranchPoint make_point(const SystemOperators& sys, double t, const StateField& U,
                              double residual_sup, int iterations, double step) {
  BranchPoint p;
  p.t = t;
  p.U = U;
  p.amp_sup = U.sup_norm();
  p.amp_h = h_norm(sys.laplacian(), U);
  p.min_u = U.size() > 0 ? U.u.minCoeff() : 0.0;
  p.min_v = U.size() > 0 ? U.v.minCoeff() : 0.0;
  p.u_positive = U.u_strictly_positive();
  p.v_positive = U.v_strictly_positive();
  p.residual_sup = residual_sup;
  p.newton_iterations = iterations;
  p.step = step;
  return p;
}

}  // namespace detail

// Predictor-corrector continuation of the positive branch from (t1, 0).
// Refuses to start unless the bifurcation parameter is simple: the paper's
// two-positive-eigenvalue scenario (a branch that could terminate at s1)
// is exactly what this guard excludes.
inline Branch continue_branch(const SystemOperators& sys, const CouplingSpectrum& cs,
                              const DiscreteSpectrum& ds, const ContinuationOptions& opts) {
  const BifurcationParameter bp = bifurcation_parameter(cs, ds);
  if (!bp.simple) throw HypothesisError("simple", "resonant or non-simple bifurcation point");
  if (!(opts.t_max > bp.t1)) throw ConfigError("continue_branch: need t_max > t1");

  Branch branch;
  branch.t1 = bp.t1;
  branch.seed_amplitude = opts.seed_eps;

  const int nodes = sys.grid().node_count();
  BranchPoint start = detail::make_point(sys, bp.t1, StateField::zero(nodes), 0.0, 0, 0.0);
  branch.points.push_back(start);

  if (!(opts.amplitude_cap > 0.0)) {
    branch.termination = BranchTermination::AmplitudeCap;
    return branch;
  }

  // First point: plain Newton at t1*(1+delta0) from the tangent seed, with a
  // graded amplitude retry if the iterate falls back onto the trivial branch.
  const double t_first = bp.t1 * (1.0 + opts.delta0);
  SolveOutcome first;
  bool have_first = false;
  for (double eps = opts.seed_eps; eps <= 1e3 * opts.seed_eps; eps *= 10.0) {
    first = newton_solve(sys, t_first, seed_tangent(cs, ds, eps), opts.newton);
    if (first.converged && first.classification == SolutionClass::PositiveSolution) {
      have_first = true;
      break;
    }
  }
  if (!have_first) {
    branch.termination = BranchTermination::StepFailure;
    return branch;
  }

  Eigen::VectorXd x_prev = StateField::zero(nodes).stacked();
  double t_prev = bp.t1;
  Eigen::VectorXd x_cur = first.field.stacked();
  double t_cur = t_first;

  {
    const double dist = std::hypot((x_cur - x_prev).norm(), t_cur - t_prev);
    BranchPoint p = detail::make_point(sys, t_cur, first.field, first.residual_sup,
                                       first.iterations, dist);
    if (p.amp_sup > opts.amplitude_cap) {
      branch.termination = BranchTermination::AmplitudeCap;
      return branch;
    }
    if (!(p.u_positive && p.v_positive)) {
      branch.termination = BranchTermination::PositivityLost;
      return branch;
    }
    if (opts.tp2_check) {
      const HopfCheck hc = hopf_positivity_check(sys, cs, t_cur, first.field);
      p.hopf_alignment = hc.alignment;
      p.hopf_eigen_gap = hc.eigen_gap;
      if (!hc.pass) {
        branch.termination = BranchTermination::PositivityLost;
        return branch;
      }
    }
    branch.points.push_back(p);
    if (t_cur >= opts.t_max) {
      branch.termination = BranchTermination::ReachedTMax;
      return branch;
    }
  }

  double s = opts.step;
  while (static_cast<int>(branch.points.size()) < opts.max_points) {
    // Secant tangent through the last two accepted points.
    Eigen::VectorXd dir_x = x_cur - x_prev;
    double dir_t = t_cur - t_prev;
    const double dn = std::hypot(dir_x.norm(), dir_t);
    dir_x /= dn;
    dir_t /= dn;

    const detail::CorrectorResult cr = detail::arclength_corrector(
        sys, x_cur, t_cur, dir_x, dir_t, s, x_cur + s * dir_x, t_cur + s * dir_t,
        opts.newton, opts.corrector_max_iterations);

    if (!cr.converged) {
      s *= 0.5;
      if (s < opts.min_step) {
        branch.termination = BranchTermination::StepFailure;
        return branch;
      }
      continue;
    }

    const double dist = std::hypot((cr.U.stacked() - x_cur).norm(), cr.t - t_cur);
    BranchPoint p = detail::make_point(sys, cr.t, cr.U, cr.residual_sup, cr.iterations, dist);
    if (p.amp_sup > opts.amplitude_cap) {
      branch.termination = BranchTermination::AmplitudeCap;
      return branch;
    }
    if (!(p.u_positive && p.v_positive)) {
      branch.termination = BranchTermination::PositivityLost;
      return branch;
    }
    if (opts.tp2_check) {
      const HopfCheck hc = hopf_positivity_check(sys, cs, cr.t, cr.U);
      p.hopf_alignment = hc.alignment;
      p.hopf_eigen_gap = hc.eigen_gap;
      if (!hc.pass) {
        branch.termination = BranchTermination::PositivityLost;
        return branch;
      }
    }

    x_prev = x_cur;
    t_prev = t_cur;
    x_cur = cr.U.stacked();
    t_cur = cr.t;
    branch.points.push_back(p);

    if (t_cur >= opts.t_max) {
      branch.termination = BranchTermination::ReachedTMax;
      return branch;
    }

    if (cr.iterations <= 3)
      s = std::min(s * 1.5, opts.max_step);
    else if (cr.iterations >= 8)
      s = std::max(s * 0.5, opts.min_step);
  }
  branch.termination = BranchTermination::StepFailure;
  return branch;
}

}  // namespace nlbranch
