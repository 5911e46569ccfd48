// Uniform interior grids on intervals and rectangles. Homogeneous Dirichlet
// data is handled by elimination: only interior nodes are stored, boundary
// values are implicitly zero.
#pragma once

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "nlbranch/errors.hpp"

namespace nlbranch {

struct GridSpec {
  int dimension = 1;
  std::array<double, 2> extents{1.0, 1.0};  // domain (0, L1) or (0, L1) x (0, L2)
  int n = 3;                                // interior nodes per axis
};

// Node ordering is lexicographic with the first axis fastest: in 2D the node
// (ix, iy) has linear index iy*n + ix and coordinates ((ix+1)h1, (iy+1)h2).
// Index <-> coordinate round-trips are exact because coordinates are always
// recomputed from the same (i+1)*h expression.
class Grid {
 public:
  static Grid build(const GridSpec& spec) {
    if (spec.dimension != 1 && spec.dimension != 2)
      throw ConfigError("grid: dimension must be 1 or 2, got " + std::to_string(spec.dimension));
    if (spec.n < 3)
      throw ConfigError("grid: need at least 3 interior nodes per axis, got " + std::to_string(spec.n));
    for (int axis = 0; axis < spec.dimension; ++axis)
      if (!(spec.extents[static_cast<size_t>(axis)] > 0.0) ||
          !std::isfinite(spec.extents[static_cast<size_t>(axis)]))
        throw ConfigError("grid: extents must be positive and finite");
    return Grid(spec);
  }

  int dimension() const { return spec_.dimension; }
  int nodes_per_axis() const { return spec_.n; }
  int node_count() const { return count_; }
  double extent(int axis) const { return spec_.extents[static_cast<size_t>(axis)]; }
  double spacing(int axis) const { return h_[static_cast<size_t>(axis)]; }

  // Measure of one node's cell: h in 1D, h1*h2 in 2D.
  double cell_measure() const {
    return spec_.dimension == 1 ? h_[0] : h_[0] * h_[1];
  }
  double domain_measure() const {
    return spec_.dimension == 1 ? spec_.extents[0] : spec_.extents[0] * spec_.extents[1];
  }
  // Total quadrature mass: the midpoint rule over interior cells misses a
  // boundary layer of one cell per side, so this is n*h per axis, not |Omega|.
  double quadrature_mass() const {
    double m = 1.0;
    for (int axis = 0; axis < spec_.dimension; ++axis) m *= spec_.n * spacing(axis);
    return m;
  }

  int index(int ix, int iy = 0) const { return iy * spec_.n + ix; }

  std::array<double, 2> coordinate(int idx) const {
    const int ix = idx % spec_.n;
    const int iy = idx / spec_.n;
    return {(ix + 1) * h_[0], spec_.dimension == 2 ? (iy + 1) * h_[1] : 0.0};
  }

  // Per-node cell measures discretizing integrals over Omega.
  Eigen::VectorXd quadrature_weights() const {
    return Eigen::VectorXd::Constant(count_, cell_measure());
  }

 private:
  explicit Grid(const GridSpec& spec) : spec_(spec) {
    for (int axis = 0; axis < spec.dimension; ++axis)
      h_[static_cast<size_t>(axis)] =
          spec.extents[static_cast<size_t>(axis)] / (spec.n + 1);
    count_ = spec.dimension == 1 ? spec.n : spec.n * spec.n;
  }

  GridSpec spec_;
  std::array<double, 2> h_{0.0, 0.0};
  int count_ = 0;
};

}  // namespace nlbranch
