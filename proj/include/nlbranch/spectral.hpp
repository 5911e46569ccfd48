// Leading eigenpairs of the discrete operators (-Laplace_h and the auxiliary
// L_h = -Laplace_h + diag(psi)) by inverse power iteration with deflation.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nlbranch/errors.hpp"
#include "nlbranch/laplacian.hpp"

namespace nlbranch {

struct DiscreteSpectrum {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // orthonormal columns; column 0 is nonnegative
  Eigen::VectorXd residuals;  // achieved |op*phi - lambda*phi|_2 per pair
};

struct EigenIterationOptions {
  double tol = 1e-12;          // residual target, relative to max(1, |lambda|)
  int max_iterations = 10000;  // per eigenpair
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// First k eigenpairs, smallest first. Deflation is modified Gram-Schmidt
// against the converged vectors on every iterate, so each run converges to
// the smallest eigenvalue of the remaining invariant subspace.
inline DiscreteSpectrum discrete_spectrum(const Eigen::SparseMatrix<double>& op, int k,
                                          const EigenIterationOptions& opts = {}) {
  const int dim = static_cast<int>(op.rows());
  if (k < 1) throw ConfigError("discrete_spectrum: need k >= 1");
  if (k > dim) throw ConfigError("discrete_spectrum: k exceeds operator dimension");

  SparseSolver solver(op);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.1, 1.0);

  DiscreteSpectrum out;
  out.values.resize(k);
  out.vectors.resize(dim, k);
  out.residuals.resize(k);

  auto deflate = [&](Eigen::VectorXd& x, int upto) {
    for (int j = 0; j < upto; ++j) x -= out.vectors.col(j).dot(x) * out.vectors.col(j);
  };

  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = unit(rng);
    deflate(v, j);
    v.normalize();

    double lambda = 0.0;
    double resid = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      Eigen::VectorXd w = solver.solve(v);
      deflate(w, j);
      const double wn = w.norm();
      if (!(wn > 0.0)) {  // start vector fell entirely into the deflated span
        for (int i = 0; i < dim; ++i) w[i] = unit(rng);
        deflate(w, j);
      }
      v = w / w.norm();
      const Eigen::VectorXd Av = op * v;
      lambda = v.dot(Av);
      resid = (Av - lambda * v).norm();
      if (resid <= opts.tol * std::max(1.0, std::abs(lambda))) break;
    }
    if (!(resid <= opts.tol * std::max(1.0, std::abs(lambda))))
      throw NumericalError("discrete_spectrum: eigenpair " + std::to_string(j + 1) +
                           " did not converge in " + std::to_string(opts.max_iterations) +
                           " iterations; achieved residual " + std::to_string(resid));

    // Canonical sign: largest-magnitude component positive.
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0) v = -v;

    out.values[j] = lambda;
    out.vectors.col(j) = v;
    out.residuals[j] = resid;
  }
  return out;
}

inline DiscreteSpectrum discrete_spectrum(const DirichletOperator& op, int k,
                                          const EigenIterationOptions& opts = {}) {
  return discrete_spectrum(op.matrix, k, opts);
}

// Rayleigh quotient <op v, v> / <v, v>; the discrete form of
// (int |grad v|^2 + psi v^2) / (int v^2) -- the cell measure cancels.
inline double rayleigh_quotient(const Eigen::SparseMatrix<double>& op,
                                const Eigen::VectorXd& v) {
  const double vv = v.squaredNorm();
  if (!(vv > 0.0)) throw ConfigError("rayleigh_quotient: zero field rejected");
  return v.dot(op * v) / vv;
}

inline double rayleigh_quotient(const DirichletOperator& op, const Eigen::VectorXd& v) {
  return rayleigh_quotient(op.matrix, v);
}

}  // namespace nlbranch
