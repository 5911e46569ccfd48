// Discrete Dirichlet Laplacian on interior nodes (3-point / 5-point stencil)
// and the reusable sparse Cholesky solver for -Laplace_h x = b.
#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "nlbranch/errors.hpp"
#include "nlbranch/grid.hpp"

namespace nlbranch {

struct DirichletOperator {
  Grid grid;
  Eigen::SparseMatrix<double> matrix;  // symmetric positive definite
  int stencil_points = 0;              // 3 in 1D, 5 in 2D
};

inline DirichletOperator assemble_laplacian(const Grid& grid) {
  const int n = grid.nodes_per_axis();
  const int count = grid.node_count();
  const double ax = 1.0 / (grid.spacing(0) * grid.spacing(0));
  std::vector<Eigen::Triplet<double>> trip;

  if (grid.dimension() == 1) {
    trip.reserve(static_cast<size_t>(3 * count));
    for (int i = 0; i < n; ++i) {
      trip.emplace_back(i, i, 2.0 * ax);
      if (i > 0) trip.emplace_back(i, i - 1, -ax);
      if (i + 1 < n) trip.emplace_back(i, i + 1, -ax);
    }
  } else {
    const double ay = 1.0 / (grid.spacing(1) * grid.spacing(1));
    trip.reserve(static_cast<size_t>(5 * count));
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const int row = grid.index(ix, iy);
        trip.emplace_back(row, row, 2.0 * ax + 2.0 * ay);
        if (ix > 0) trip.emplace_back(row, grid.index(ix - 1, iy), -ax);
        if (ix + 1 < n) trip.emplace_back(row, grid.index(ix + 1, iy), -ax);
        if (iy > 0) trip.emplace_back(row, grid.index(ix, iy - 1), -ay);
        if (iy + 1 < n) trip.emplace_back(row, grid.index(ix, iy + 1), -ay);
      }
    }
  }

  Eigen::SparseMatrix<double> m(count, count);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return DirichletOperator{grid, std::move(m), grid.dimension() == 1 ? 3 : 5};
}

// -Laplace_h + diag(psi), the auxiliary operator with potential psi >= 0.
inline Eigen::SparseMatrix<double> operator_with_potential(
    const DirichletOperator& lap, const Eigen::VectorXd& psi) {
  if (psi.size() != lap.matrix.rows())
    throw ConfigError("operator_with_potential: potential size mismatch");
  if (psi.minCoeff() < 0.0)
    throw ConfigError("operator_with_potential: potential must be nonnegative");
  Eigen::SparseMatrix<double> m = lap.matrix;
  for (int i = 0; i < psi.size(); ++i) m.coeffRef(i, i) += psi[i];
  m.makeCompressed();
  return m;
}

// Shared sparse Cholesky factorization; each call verifies the backward
// error of the computed solution.
class SparseSolver {
 public:
  explicit SparseSolver(const Eigen::SparseMatrix<double>& matrix)
      : matrix_(matrix) {
    llt_.compute(matrix_);
    if (llt_.info() != Eigen::Success)
      throw NumericalError("sparse Cholesky factorization failed (matrix not SPD?)");
    norm_inf_ = 0.0;
    for (int k = 0; k < matrix_.outerSize(); ++k) {
      double rowsum = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, k); it; ++it)
        rowsum += std::abs(it.value());
      norm_inf_ = std::max(norm_inf_, rowsum);  // symmetric: row sums = col sums
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = llt_.solve(rhs);
    const double resid = (matrix_ * x - rhs).lpNorm<Eigen::Infinity>();
    const double scale = rhs.lpNorm<Eigen::Infinity>() +
                         norm_inf_ * x.lpNorm<Eigen::Infinity>() +
                         std::numeric_limits<double>::min();
    if (!(resid <= 1e-12 * scale))
      throw NumericalError("linear solve breakdown: relative residual " +
                           std::to_string(resid / scale));
    return x;
  }

  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

 private:
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
  double norm_inf_ = 0.0;
};

}  // namespace nlbranch
