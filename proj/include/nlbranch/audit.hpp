// Branch diagnostics: the symmetrization audit certifying t > lambda_1/lambda
// on any positive solution, the near-bifurcation sign check, and the a priori
// norm monitor.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "nlbranch/continuation.hpp"
#include "nlbranch/coupling.hpp"
#include "nlbranch/state.hpp"
#include "nlbranch/system.hpp"

namespace nlbranch {

// The substitution w = sigma*v with sigma^2 = b/c turns the coupling into the
// symmetric matrix A0 = (a b^; b^ d), b^ = b/sigma = sqrt(bc), whose quadratic
// form is pinched between mu|z|^2 and lambda|z|^2. Combining the discrete
// energy identity with that pinch and the Poincare floor yields the
// certificate t > lambda_1/lambda for every positive solution.
struct AuditReport {
  double t = 0.0;
  double sigma = 0.0, b_hat = 0.0;
  Eigen::Matrix2d A0;
  double dirichlet_energy = 0.0;  // D = int |grad u|^2 + |grad w|^2
  double mass = 0.0;              // m = int u^2 + w^2
  double nonlocal_energy = 0.0;   // N = int phi u^2 + psi w^2
  double coupling_form = 0.0;     // T = t * int <A0 (u,w), (u,w)>
  double identity_gap = 0.0;      // |D + N - T|, ~0 on converged solutions
  double upper_slack = 0.0;       // t*lambda*m - T  >= 0
  double poincare_slack = 0.0;    // D - lambda_1*m >= 0
  double lower_bound = 0.0;       // D / (lambda*m); certificate: t > this
  double certified_floor = 0.0;   // lambda_1 / lambda
  // Certified strict margin: t - lambda_1/lambda >= (N + poincare_slack -
  // identity_gap) / (lambda*m). Positive margin makes the chain conclusive
  // even though the energy identity only holds up to the Newton residual.
  double certified_margin = 0.0;
  bool certificate_holds = false;
};

inline AuditReport nonexistence_audit(const SystemOperators& sys, const CouplingSpectrum& cs,
                                      const DiscreteSpectrum& ds, double t,
                                      const StateField& U) {
  const CouplingMatrix& A = sys.coupling();
  if (!(A.b * A.c > 0.0))
    throw HypothesisError("bc_positive", "symmetrization requires b*c > 0");
  if (!U.strictly_positive())
    throw ConfigError("nonexistence_audit: point is not a positive solution");

  AuditReport rep;
  rep.t = t;
  rep.sigma = std::sqrt(A.b / A.c);
  rep.b_hat = A.b / rep.sigma;
  rep.A0 << A.a, rep.b_hat, rep.b_hat, A.d;

  const DirichletOperator& lap = sys.laplacian();
  const double hd = lap.grid.cell_measure();
  const Eigen::VectorXd w = rep.sigma * U.v;
  const Eigen::VectorXd phi = sys.f_term().coefficient(U.u, U.v);
  const Eigen::VectorXd psi = sys.g_term().coefficient(U.u, U.v);

  rep.dirichlet_energy = hd * (U.u.dot(lap.matrix * U.u) + w.dot(lap.matrix * w));
  rep.mass = hd * (U.u.squaredNorm() + w.squaredNorm());
  rep.nonlocal_energy = hd * (phi.dot(U.u.cwiseAbs2()) + psi.dot(w.cwiseAbs2()));
  rep.coupling_form =
      t * hd *
      (A.a * U.u.squaredNorm() + 2.0 * rep.b_hat * U.u.dot(w) + A.d * w.squaredNorm());

  rep.identity_gap = std::abs(rep.dirichlet_energy + rep.nonlocal_energy - rep.coupling_form);
  rep.upper_slack = t * cs.lambda * rep.mass - rep.coupling_form;
  rep.poincare_slack = rep.dirichlet_energy - ds.values[0] * rep.mass;
  rep.lower_bound = rep.dirichlet_energy / (cs.lambda * rep.mass);
  rep.certified_floor = ds.values[0] / cs.lambda;

  // t*lambda*m >= T = D + N - gap >= lambda_1*m + poincare_slack + N - gap,
  // so the strict conclusion t > lambda_1/lambda is certified exactly when
  // N + poincare_slack outweighs the residual-induced identity gap. The
  // upper/poincare links hold pointwise for any field; requiring them only
  // guards against rounding.
  const double scale = std::abs(rep.coupling_form) + std::abs(rep.dirichlet_energy);
  rep.certified_margin =
      (rep.nonlocal_energy + std::max(rep.poincare_slack, 0.0) - rep.identity_gap) /
      (cs.lambda * rep.mass);
  rep.certificate_holds = rep.upper_slack >= -1e-12 * scale &&
                          rep.poincare_slack >= -1e-12 * scale &&
                          rep.certified_margin > 0.0 &&
                          rep.t > rep.certified_floor;
  return rep;
}

// Near-bifurcation sign structure: inside the window |t - t1| + ||U|| <
// window, every nontrivial branch point must be one-signed and aligned with
// the tangent direction (alpha*phi1, beta*phi1).
struct SignCheckEntry {
  int index = 0;
  double t = 0.0;
  double amp = 0.0;
  bool in_window = false;
  bool defined_signal = false;
  double cosine = 0.0;  // signed, against the positive tangent direction
  bool pass = true;
};

struct SignCheckReport {
  double window = 0.0;
  double cosine_threshold = 0.0;
  std::vector<SignCheckEntry> entries;
  int checked = 0;
  bool all_pass = true;
};

inline SignCheckReport sign_check(const Branch& branch, const CouplingSpectrum& cs,
                                  const DiscreteSpectrum& ds, double window,
                                  double cosine_threshold = 0.99) {
  if (branch.points.empty()) throw ConfigError("sign_check: empty branch");

  SignCheckReport rep;
  rep.window = window;
  rep.cosine_threshold = cosine_threshold;

  Eigen::VectorXd dir(2 * ds.vectors.rows());
  dir << cs.z[0] * ds.vectors.col(0), cs.z[1] * ds.vectors.col(0);
  dir.normalize();

  for (size_t i = 0; i < branch.points.size(); ++i) {
    const BranchPoint& p = branch.points[i];
    SignCheckEntry e;
    e.index = static_cast<int>(i);
    e.t = p.t;
    e.amp = p.amp_sup;
    e.in_window = std::abs(p.t - branch.t1) + p.amp_sup < window;
    if (!e.in_window || p.amp_sup == 0.0) {  // the start datum carries no sign
      rep.entries.push_back(e);
      continue;
    }
    const bool pos = p.U.strictly_positive();
    const bool neg = p.U.strictly_negative();
    e.defined_signal = pos || neg;
    const Eigen::VectorXd x = p.U.stacked();
    e.cosine = dir.dot(x) / x.norm();
    const double aligned = pos ? e.cosine : -e.cosine;
    e.pass = e.defined_signal && aligned >= cosine_threshold;
    rep.all_pass = rep.all_pass && e.pass;
    ++rep.checked;
    rep.entries.push_back(e);
  }
  return rep;
}

// A priori estimate monitor: the largest sup and H norms over branch points
// with t <= Lambda. Purely observational - finiteness plus a declared cap.
struct AprioriReport {
  double r_sup = 0.0;
  double r_h = 0.0;
  int points_considered = 0;
  bool finite = true;
  bool within_cap = true;
  double cap = 0.0;
};

inline AprioriReport apriori_monitor(const Branch& branch, double lambda_cap, double norm_cap) {
  AprioriReport rep;
  rep.cap = norm_cap;
  for (const BranchPoint& p : branch.points) {
    if (p.t > lambda_cap) continue;
    ++rep.points_considered;
    rep.r_sup = std::max(rep.r_sup, p.amp_sup);
    rep.r_h = std::max(rep.r_h, p.amp_h);
  }
  rep.finite = std::isfinite(rep.r_sup) && std::isfinite(rep.r_h);
  rep.within_cap = rep.r_sup <= norm_cap;
  return rep;
}

}  // namespace nlbranch
