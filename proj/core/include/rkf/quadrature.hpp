#pragma once

#include <cstddef>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "rkf/distribution.hpp"

namespace rkf {

/// One-dimensional Gauss rule for a probability measure (weights sum to 1).
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre for the uniform density on [-1, 1].
GaussRule1D gauss_legendre(int points);
/// Gauss–Hermite for the standard normal density (probabilists' weight).
GaussRule1D gauss_hermite(int points);

/// Tensor-product Gauss rule against p(Δ). Every node is stored twice: in
/// the standard coordinate ξ (where the orthogonal basis lives) and in the
/// physical coordinate δ (where A(Δ), B(Δ) are evaluated).
struct QuadratureRule {
  Eigen::MatrixXd standard_nodes;  // dims x size
  Eigen::MatrixXd nodes;           // dims x size
  Eigen::VectorXd weights;
  /// Per-dimension polynomial degree integrated exactly.
  int exactness_degree = 0;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  int dims() const { return static_cast<int>(nodes.rows()); }
};

/// Gauss–Legendre per uniform dimension, Gauss–Hermite per gaussian (and
/// point-mass) dimension, full tensor grid. Exactness is 2 * points - 1.
QuadratureRule build_quadrature(const ParameterDistribution& dist, int points_per_dim);

/// Σ_q w_q f(node_q) with f evaluated at physical nodes δ_q. f may return a
/// scalar or any Eigen matrix expression.
template <class F>
auto expect(const QuadratureRule& rule, F&& f) {
  using R = std::decay_t<decltype(f(Eigen::VectorXd(rule.nodes.col(0))))>;
  if constexpr (std::is_arithmetic_v<R>) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) acc += rule.weights[q] * f(Eigen::VectorXd(rule.nodes.col(q)));
    return acc;
  } else {
    Eigen::MatrixXd acc;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Eigen::MatrixXd value = f(Eigen::VectorXd(rule.nodes.col(q)));
      if (q == 0) acc = Eigen::MatrixXd::Zero(value.rows(), value.cols());
      acc += rule.weights[q] * value;
    }
    return acc;
  }
}

/// As `expect`, but f receives the node index so it can use both the
/// standard and the physical coordinates.
template <class F>
Eigen::MatrixXd expect_indexed(const QuadratureRule& rule, F&& f) {
  Eigen::MatrixXd acc;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Eigen::MatrixXd value = f(q);
    if (q == 0) acc = Eigen::MatrixXd::Zero(value.rows(), value.cols());
    acc += rule.weights[q] * value;
  }
  return acc;
}

}  // namespace rkf
