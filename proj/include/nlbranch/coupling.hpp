// Closed-form spectral analysis of the 2x2 coupling matrix and the
// bifurcation parameter t1 = lambda_1 / lambda.
#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "nlbranch/errors.hpp"
#include "nlbranch/spectral.hpp"

namespace nlbranch {

struct CouplingMatrix {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  Eigen::Matrix2d as_matrix() const {
    Eigen::Matrix2d m;
    m << a, b, c, d;
    return m;
  }
  double frobenius_norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

enum class SpectrumKind { RealDistinct, RealRepeated, ComplexPair };

inline const char* to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::RealDistinct: return "real-distinct";
    case SpectrumKind::RealRepeated: return "real-repeated";
    case SpectrumKind::ComplexPair: return "complex-pair";
  }
  return "?";
}

struct CouplingSpectrum {
  SpectrumKind kind = SpectrumKind::RealDistinct;
  // Real eigenvalues mu <= lambda; NaN when kind == ComplexPair.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  Eigen::Vector2d z{0.0, 0.0};  // unit eigenvector for lambda
  Eigen::Vector2d w{0.0, 0.0};  // unit eigenvector for mu
  bool lambda_positive = false;
  bool z_strictly_positive = false;  // both components of z the same strict sign
  bool lambda_simple = false;        // dim N(lambda I - A) == 1
  bool unique_positive_eigenvalue = false;
};

namespace detail {

// Row-based eigenvector for eigenvalue nu: (A - nu I) has proportional rows,
// so (b, nu-a) and (nu-d, c) both solve it; pick the better-conditioned one.
inline Eigen::Vector2d eigenvector_2x2(const CouplingMatrix& A, double nu, bool second_axis) {
  Eigen::Vector2d r1(A.b, nu - A.a);
  Eigen::Vector2d r2(nu - A.d, A.c);
  Eigen::Vector2d v = r1.norm() >= r2.norm() ? r1 : r2;
  if (v.norm() <= 1e-300)  // A ~ nu*I: two-dimensional eigenspace, pick an axis
    v = second_axis ? Eigen::Vector2d(0.0, 1.0) : Eigen::Vector2d(1.0, 0.0);
  v.normalize();
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
  return v;
}

}  // namespace detail

// Total classification: every finite 2x2 matrix gets a spectrum. The
// discriminant of the characteristic polynomial is (a-d)^2 + 4bc; near-zero
// discriminants are classified RealRepeated with lambda_simple = false so
// ambiguous simplicity is surfaced rather than resolved by rounding.
inline CouplingSpectrum analyze_coupling(const CouplingMatrix& A) {
  if (!std::isfinite(A.a) || !std::isfinite(A.b) || !std::isfinite(A.c) || !std::isfinite(A.d))
    throw ConfigError("analyze_coupling: matrix entries must be finite");

  const double scale = A.frobenius_norm();
  const double disc = (A.a - A.d) * (A.a - A.d) + 4.0 * A.b * A.c;
  const double half_trace = 0.5 * (A.a + A.d);

  CouplingSpectrum cs;
  if (disc < -1e-12 * scale * scale) {
    cs.kind = SpectrumKind::ComplexPair;
    return cs;  // all flags false; eigen fields stay NaN
  }

  if (std::abs(disc) < 1e-12 * scale * scale) {
    cs.kind = SpectrumKind::RealRepeated;
    cs.lambda = cs.mu = half_trace;
    cs.z = detail::eigenvector_2x2(A, cs.lambda, false);
    cs.w = detail::eigenvector_2x2(A, cs.mu, true);
    cs.lambda_simple = false;
    cs.lambda_positive = cs.lambda > 0.0;
    cs.z_strictly_positive = cs.z.minCoeff() > 0.0;
    cs.unique_positive_eigenvalue = false;  // two (equal) positive ones, or none
    return cs;
  }

  const double root = std::sqrt(disc);
  cs.kind = SpectrumKind::RealDistinct;
  cs.lambda = half_trace + 0.5 * root;
  cs.mu = half_trace - 0.5 * root;
  cs.z = detail::eigenvector_2x2(A, cs.lambda, false);
  cs.w = detail::eigenvector_2x2(A, cs.mu, true);
  cs.lambda_simple = true;
  cs.lambda_positive = cs.lambda > 0.0;
  cs.z_strictly_positive = cs.z.minCoeff() > 0.0;
  cs.unique_positive_eigenvalue = cs.lambda > 0.0 && !(cs.mu > 0.0);
  return cs;
}

struct BifurcationParameter {
  double t1 = 0.0;       // lambda_1 / lambda: the branch leaves (t1, 0)
  bool simple = true;    // one-dimensional solution space at t1
  double s1 = 0.0;       // lambda_1 / mu, diagnostic; valid iff has_s1
  bool has_s1 = false;   // a second positive eigenvalue exists
};

// t1 = lambda_1 / lambda. The solution space at t1 is one-dimensional unless
// t1*mu collides with some discrete eigenvalue lambda_j (for lambda > mu the
// collision is impossible: t1*mu < lambda_1 <= lambda_j).
inline BifurcationParameter bifurcation_parameter(const CouplingSpectrum& cs,
                                                  const DiscreteSpectrum& ds) {
  if (!cs.lambda_positive) throw HypothesisError("lambda_positive");
  if (!cs.z_strictly_positive) throw HypothesisError("z_strictly_positive");

  BifurcationParameter bp;
  bp.t1 = ds.values[0] / cs.lambda;
  bp.simple = cs.lambda_simple;
  if (cs.kind != SpectrumKind::ComplexPair) {
    const double probe = bp.t1 * cs.mu;
    for (int j = 0; j < ds.values.size(); ++j) {
      const double gap = std::abs(probe - ds.values[j]);
      if (gap <= 1e-9 * std::max({std::abs(probe), std::abs(ds.values[j]), 1.0}))
        bp.simple = false;
    }
    if (cs.mu > 0.0) {
      bp.s1 = ds.values[0] / cs.mu;
      bp.has_s1 = true;
    }
  }
  return bp;
}

}  // namespace nlbranch
