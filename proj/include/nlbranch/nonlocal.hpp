// Nystrom sampling of interaction kernels at node pairs and evaluation of
// the nonlocal crowding coefficients phi_(u,v), psi_(u,v) and the vector
// term Phi_U = (u*phi, v*psi).
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "nlbranch/crowding.hpp"
#include "nlbranch/errors.hpp"
#include "nlbranch/grid.hpp"
#include "nlbranch/state.hpp"

namespace nlbranch {

struct KernelSpec {
  enum class Kind { Constant, Separable, BallIndicator, Tabulated };

  Kind kind = Kind::Constant;
  double value = 1.0;                                             // Constant
  std::function<double(const std::array<double, 2>&)> rho;        // Separable
  double radius = 0.0;                                            // BallIndicator
  Eigen::MatrixXd table;                                          // Tabulated

  static KernelSpec constant(double kappa) {
    if (!(kappa >= 0.0)) throw ConfigError("constant kernel: need kappa >= 0");
    KernelSpec k;
    k.kind = Kind::Constant;
    k.value = kappa;
    return k;
  }
  static KernelSpec separable(std::function<double(const std::array<double, 2>&)> rho) {
    KernelSpec k;
    k.kind = Kind::Separable;
    k.rho = std::move(rho);
    return k;
  }
  static KernelSpec ball_indicator(double r) {
    if (!(r >= 0.0)) throw ConfigError("indicator kernel: need radius >= 0");
    KernelSpec k;
    k.kind = Kind::BallIndicator;
    k.radius = r;
    return k;
  }
  static KernelSpec tabulated(Eigen::MatrixXd values) {
    KernelSpec k;
    k.kind = Kind::Tabulated;
    k.table = std::move(values);
    return k;
  }
};

// Dense matrix of samples M(i,j) = K(x_i, y_j). Any negative sample aborts,
// naming the offending node pair.
inline Eigen::MatrixXd sample_kernel(const KernelSpec& spec, const Grid& grid) {
  const int count = grid.node_count();
  Eigen::MatrixXd m(count, count);

  switch (spec.kind) {
    case KernelSpec::Kind::Constant:
      m.setConstant(spec.value);
      return m;
    case KernelSpec::Kind::Tabulated:
      if (spec.table.rows() != count || spec.table.cols() != count)
        throw ConfigError("tabulated kernel: table is " + std::to_string(spec.table.rows()) +
                          "x" + std::to_string(spec.table.cols()) + ", grid has " +
                          std::to_string(count) + " nodes");
      m = spec.table;
      break;
    case KernelSpec::Kind::Separable: {
      Eigen::VectorXd r(count);
      for (int i = 0; i < count; ++i) r[i] = spec.rho(grid.coordinate(i));
      m = r * r.transpose();
      break;
    }
    case KernelSpec::Kind::BallIndicator: {
      for (int i = 0; i < count; ++i) {
        const auto xi = grid.coordinate(i);
        for (int j = 0; j < count; ++j) {
          const auto yj = grid.coordinate(j);
          const double dist = std::hypot(xi[0] - yj[0], xi[1] - yj[1]);
          m(i, j) = dist <= spec.radius ? 1.0 : 0.0;
        }
      }
      return m;
    }
  }

  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      if (!(m(i, j) >= 0.0))
        throw ConfigError("kernel sample negative at node pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + "): value " + std::to_string(m(i, j)));
  return m;
}

// A sampled kernel + quadrature weights + crowding function; evaluates the
// nonlocal coefficient field phi_i = sum_j M(i,j) f(|u_j|, |v_j|) w_j.
class NonlocalTerm {
 public:
  NonlocalTerm(Eigen::MatrixXd kernel_samples, Eigen::VectorXd weights, CrowdingFunction crowd)
      : kernel_(std::move(kernel_samples)),
        weights_(std::move(weights)),
        crowd_(std::move(crowd)) {
    if (kernel_.rows() != kernel_.cols() || kernel_.rows() != weights_.size())
      throw ConfigError("NonlocalTerm: kernel/weights dimension mismatch");
    kernel_sup_ = kernel_.size() > 0 ? kernel_.maxCoeff() : 0.0;
  }

  NonlocalTerm(const KernelSpec& spec, const Grid& grid, CrowdingFunction crowd)
      : NonlocalTerm(sample_kernel(spec, grid), grid.quadrature_weights(), std::move(crowd)) {}

  Eigen::VectorXd coefficient(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    if (u.size() != weights_.size() || v.size() != weights_.size())
      throw ConfigError("NonlocalTerm: field/grid mismatch");
    Eigen::VectorXd fw(weights_.size());
    for (int j = 0; j < weights_.size(); ++j)
      fw[j] = crowd_(std::abs(u[j]), std::abs(v[j])) * weights_[j];
    return kernel_ * fw;
  }

  const Eigen::MatrixXd& kernel() const { return kernel_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const CrowdingFunction& crowding() const { return crowd_; }
  double gamma() const { return crowd_.gamma(); }
  double kernel_sup() const { return kernel_sup_; }
  int size() const { return static_cast<int>(weights_.size()); }

 private:
  Eigen::MatrixXd kernel_;
  Eigen::VectorXd weights_;
  CrowdingFunction crowd_;
  double kernel_sup_ = 0.0;
};

// Phi_U = (u .* phi_(u,v), v .* psi_(u,v)).
inline StateField eval_Phi(const NonlocalTerm& f_term, const NonlocalTerm& g_term,
                           const StateField& U) {
  if (f_term.size() != U.size() || g_term.size() != U.size())
    throw ConfigError("eval_Phi: field/grid mismatch");
  StateField out;
  out.u = U.u.cwiseProduct(f_term.coefficient(U.u, U.v));
  out.v = U.v.cwiseProduct(g_term.coefficient(U.u, U.v));
  return out;
}

// Randomized + structured probe of the class-K definiteness condition: the
// weighted double sum must be strictly positive for every nonzero field.
struct KernelClassReport {
  int trials = 0;
  double min_value = std::numeric_limits<double>::infinity();
  bool zero_found = false;
  Eigen::VectorXd witness;  // a nonzero field with vanishing double sum
};

inline KernelClassReport check_kernel_class(const NonlocalTerm& term, int trials,
                                            std::uint64_t seed = 7) {
  const int n = term.size();
  const double gamma = term.gamma();
  const auto& w = term.weights();

  auto double_sum = [&](const Eigen::VectorXd& field) {
    Eigen::VectorXd b(n), a(n);
    for (int j = 0; j < n; ++j) b[j] = std::pow(std::abs(field[j]), gamma) * w[j];
    for (int i = 0; i < n; ++i) a[i] = field[i] * field[i] * w[i];
    return a.dot(term.kernel() * b);
  };

  KernelClassReport report;
  auto probe = [&](const Eigen::VectorXd& field) {
    if (field.lpNorm<Eigen::Infinity>() == 0.0) return;
    const double q = double_sum(field);
    ++report.trials;
    report.min_value = std::min(report.min_value, q);
    if (!(q > 0.0) && !report.zero_found) {
      report.zero_found = true;
      report.witness = field;
    }
  };

  // Structured witnesses: half-support indicators and single-node spikes.
  Eigen::VectorXd half = Eigen::VectorXd::Zero(n);
  half.head(n / 2).setOnes();
  probe(half);
  Eigen::VectorXd other = Eigen::VectorXd::Ones(n) - half;
  probe(other);
  for (int i : {0, n / 2, n - 1}) {
    Eigen::VectorXd spike = Eigen::VectorXd::Zero(n);
    spike[i] = 1.0;
    probe(spike);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd field(n);
    for (int i = 0; i < n; ++i) field[i] = unit(rng);
    probe(field);
  }
  return report;
}

}  // namespace nlbranch
