// Existence-threshold location by bisection on the multi-start solvability
// predicate. "A positive solution exists at t" is operationalized as: damped
// Newton from a graded family of positive starts converges to a strictly
// positive field.
#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlbranch/continuation.hpp"
#include "nlbranch/coupling.hpp"
#include "nlbranch/newton.hpp"
#include "nlbranch/system.hpp"

namespace nlbranch {

struct ThresholdOptions {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double bisect_tol = 0.005;  // bracket width target, relative to t1
  std::array<double, 3> seed_amplitudes{1e-3, 1e-2, 1e-1};
  // The constant starts must ladder up to the solution scale: far above t1
  // the positive solution is O(t1..10*t1) in amplitude and small starts fall
  // into the basin of the trivial root.
  std::array<double, 5> constant_amplitudes{1e-2, 1e-1, 1.0, 10.0, 100.0};
  NewtonOptions newton;
};

struct PositiveWitness {
  double t = 0.0;
  StateField U;
  double residual_sup = 0.0;
  int newton_iterations = 0;
};

struct ThresholdResult {
  double t_star = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double t1 = 0.0;
  int bisections = 0;
  std::vector<std::pair<double, bool>> history;  // predicate evaluations in order
  std::vector<PositiveWitness> witnesses;        // every positive solution found
};

namespace detail {

inline bool existence_predicate(const SystemOperators& sys, const CouplingSpectrum& cs,
                                const DiscreteSpectrum& ds, double t,
                                const ThresholdOptions& opts,
                                std::vector<PositiveWitness>& witnesses) {
  const int nodes = sys.grid().node_count();
  std::vector<StateField> starts;
  for (double eps : opts.seed_amplitudes) starts.push_back(seed_tangent(cs, ds, eps));
  for (double amp : opts.constant_amplitudes)
    starts.push_back(StateField::constant(nodes, amp, amp));

  for (const StateField& start : starts) {
    const SolveOutcome out = newton_solve(sys, t, start, opts.newton);
    if (out.converged && out.classification == SolutionClass::PositiveSolution) {
      // Witness list only keeps solutions clearing the zero classification
      // threshold by a decade; right at the bifurcation point Newton can halt
      // inside the near-kernel dust where the field is positive but below the
      // amplitude the residual tolerance resolves.
      const double floor = 10.0 * opts.newton.zero_threshold * (1.0 + start.sup_norm());
      if (out.field.sup_norm() > floor)
        witnesses.push_back({t, out.field, out.residual_sup, out.iterations});
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline ThresholdResult existence_threshold(const SystemOperators& sys,
                                           const CouplingSpectrum& cs,
                                           const DiscreteSpectrum& ds,
                                           const ThresholdOptions& opts) {
  const BifurcationParameter bp = bifurcation_parameter(cs, ds);
  if (!bp.simple) throw HypothesisError("simple", "resonant or non-simple bifurcation point");
  if (!(opts.t_lo < bp.t1 && bp.t1 < opts.t_hi)) {
    std::ostringstream os;
    os << "existence_threshold: sanity bracket violated, need t_lo < t1 < t_hi but got t_lo="
       << opts.t_lo << ", t1=" << bp.t1 << ", t_hi=" << opts.t_hi;
    throw ConfigError(os.str());
  }
  if (!(opts.bisect_tol > 0.0)) throw ConfigError("existence_threshold: need bisect_tol > 0");

  ThresholdResult res;
  res.t1 = bp.t1;

  auto predicate = [&](double t) {
    const bool p = detail::existence_predicate(sys, cs, ds, t, opts, res.witnesses);
    res.history.emplace_back(t, p);
    return p;
  };

  const bool p_lo = predicate(opts.t_lo);
  const bool p_hi = predicate(opts.t_hi);
  if (p_lo || !p_hi) {
    std::ostringstream os;
    os << "existence_threshold: inconsistent predicate bracket; witnesses: P(t_lo=" << opts.t_lo
       << ") = " << (p_lo ? "true" : "false") << ", P(t_hi=" << opts.t_hi << ") = "
       << (p_hi ? "true" : "false")
       << " (expected false/true; tolerance trouble, not silently resolvable)";
    throw NumericalError(os.str());
  }

  double lo = opts.t_lo, hi = opts.t_hi;
  while (hi - lo > opts.bisect_tol * bp.t1) {
    const double mid = 0.5 * (lo + hi);
    if (predicate(mid))
      hi = mid;
    else
      lo = mid;
    ++res.bisections;
  }

  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.t_star = 0.5 * (lo + hi);
  return res;
}

}  // namespace nlbranch
