// Executable oracle for the linear homogeneous system -Lap U = A U: the
// numerical kernel of the 2n x 2n block matrix is scanned by SVD and each
// kernel vector is checked against the projection identity (the matrix
// A z = lambda_j z with z the pair of eigenfunction moments) and against the
// predicted tensor form U = phi_j z.
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nlbranch/coupling.hpp"
#include "nlbranch/laplacian.hpp"
#include "nlbranch/spectral.hpp"

namespace nlbranch {

struct KernelVectorFinding {
  Eigen::VectorXd u, v;          // components of the kernel vector (unit stacked norm)
  double singular_value = 0.0;

  struct ProjectionCheck {
    int j = 0;                   // discrete eigenvalue index (0-based)
    double lambda_j = 0.0;
    Eigen::Vector2d z{0.0, 0.0}; // (<u, phi_j>, <v, phi_j>) with quadrature weights
    double eigen_residual = 0.0; // |A z - lambda_j z| / (|A| |z|)
  };
  std::vector<ProjectionCheck> projections;   // at matched eigenvalues, nonzero z only
  double expansion_residual = 0.0;  // distance from span{phi_j e_1, phi_j e_2 : j matched}
  bool nonnegative = false;         // sign-flipped vector has both components >= 0
  bool component_vanishes = false;  // one component identically ~0 (recorded, not classified)
  bool lemma_ee_positive = false;   // nonnegative vector pins lambda_1 with positive A-eigenvector
};

struct LemmaEReport {
  std::vector<double> matched_eigenvalues;  // sigma(A) intersect sigma(-Lap_h) found
  int kernel_dimension = 0;
  int predicted_dimension = 0;  // sum over matches of dim N(A - lambda_j I) * multiplicity
  bool non_simple_match = false;  // some matched eigenvalue has a 2-dim A-eigenspace
  std::vector<KernelVectorFinding> vectors;
  std::vector<double> smallest_singular_values;  // diagnostics (up to 6)
  double threshold = 0.0;                        // absolute singular-value cutoff
};

inline LemmaEReport linear_kernel_scan(const CouplingMatrix& A, const DiscreteSpectrum& ds,
                                       const DirichletOperator& lap,
                                       double rel_threshold = 1e-8) {
  if (ds.values.size() < 3)
    throw ConfigError("linear_kernel_scan: need at least 3 computed eigenpairs");

  const int n = static_cast<int>(lap.matrix.rows());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = Eigen::MatrixXd(lap.matrix);
  block.bottomRightCorner(n, n) = Eigen::MatrixXd(lap.matrix);
  block.topLeftCorner(n, n).diagonal().array() -= A.a;
  block.topRightCorner(n, n).diagonal().array() = -A.b;
  block.bottomLeftCorner(n, n).diagonal().array() = -A.c;
  block.bottomRightCorner(n, n).diagonal().array() -= A.d;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();

  LemmaEReport report;
  report.threshold = rel_threshold * sv[0];
  for (int i = std::max(0, static_cast<int>(sv.size()) - 6); i < sv.size(); ++i)
    report.smallest_singular_values.push_back(sv[i]);

  // Matched eigenvalues and the spectral prediction of the kernel dimension.
  const CouplingSpectrum cs = analyze_coupling(A);
  std::vector<std::pair<double, int>> matches;  // (eigenvalue, dim N(A - nu I))
  if (cs.kind != SpectrumKind::ComplexPair) {
    const bool is_scalar_multiple =
        cs.kind == SpectrumKind::RealRepeated &&
        std::abs(A.b) + std::abs(A.c) + std::abs(A.a - A.d) <= 1e-12 * (1.0 + A.frobenius_norm());
    if (cs.kind == SpectrumKind::RealRepeated)
      matches.emplace_back(cs.lambda, is_scalar_multiple ? 2 : 1);
    else {
      matches.emplace_back(cs.mu, 1);
      matches.emplace_back(cs.lambda, 1);
    }
  }
  std::vector<int> matched_j;  // indices of discrete eigenvalues matching sigma(A)
  for (const auto& [nu, dim_a] : matches) {
    int multiplicity = 0;
    for (int j = 0; j < ds.values.size(); ++j) {
      if (std::abs(nu - ds.values[j]) <= report.threshold) {
        ++multiplicity;
        if (std::find(matched_j.begin(), matched_j.end(), j) == matched_j.end())
          matched_j.push_back(j);
      }
    }
    if (multiplicity > 0) {
      report.matched_eigenvalues.push_back(nu);
      report.predicted_dimension += dim_a * multiplicity;
      if (dim_a > 1) report.non_simple_match = true;
    }
  }

  const double hd = lap.grid.cell_measure();
  const double a_norm = A.frobenius_norm();

  for (int col = 0; col < sv.size(); ++col) {
    if (sv[col] > report.threshold) continue;
    ++report.kernel_dimension;

    Eigen::VectorXd x = svd.matrixV().col(col);
    if (x.sum() < 0.0) x = -x;
    KernelVectorFinding f;
    f.singular_value = sv[col];
    f.u = x.head(n);
    f.v = x.tail(n);

    // Projection identity at each matched discrete eigenvalue.
    for (int j : matched_j) {
      const Eigen::VectorXd& phi = ds.vectors.col(j);
      Eigen::Vector2d z(hd * phi.dot(f.u), hd * phi.dot(f.v));
      if (z.norm() <= 1e-12) continue;
      KernelVectorFinding::ProjectionCheck pc;
      pc.j = j;
      pc.lambda_j = ds.values[j];
      pc.z = z;
      pc.eigen_residual = (A.as_matrix() * z - ds.values[j] * z).norm() / (a_norm * z.norm());
      f.projections.push_back(pc);
    }

    // Expansion in the matched tensor basis phi_j (x) e_k (Lemma items ii/iii
    // say kernel vectors have exactly this form).
    Eigen::VectorXd u_rec = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd v_rec = Eigen::VectorXd::Zero(n);
    for (int j : matched_j) {
      const Eigen::VectorXd& phi = ds.vectors.col(j);
      u_rec += phi.dot(f.u) * phi;
      v_rec += phi.dot(f.v) * phi;
    }
    f.expansion_residual = std::hypot((f.u - u_rec).norm(), (f.v - v_rec).norm());

    const double tol0 = 1e-8;
    f.component_vanishes = f.u.lpNorm<Eigen::Infinity>() <= tol0 ||
                           f.v.lpNorm<Eigen::Infinity>() <= tol0;
    f.nonnegative = f.u.minCoeff() >= -tol0 && f.v.minCoeff() >= -tol0;

    // Lemma 3.2 / Corollary path: a nonnegative nonzero kernel vector with both
    // components active forces lambda_1 into sigma(A) with a positive eigenvector.
    if (f.nonnegative && !f.component_vanishes) {
      for (const auto& pc : f.projections)
        if (pc.j == 0 && pc.z.minCoeff() > 0.0) f.lemma_ee_positive = true;
    }

    report.vectors.push_back(std::move(f));
  }
  return report;
}

}  // namespace nlbranch
