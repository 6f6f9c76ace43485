#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rkf/distribution.hpp"
#include "rkf/polynomial.hpp"
#include "rkf/quadrature.hpp"

namespace rkf {

/// Total-order polynomial chaos basis {φ_0 .. φ_N} orthogonal with respect
/// to p(Δ). Legendre for uniform dimensions, probabilists' Hermite for
/// gaussian and point-mass dimensions; multivariate functions are tensor
/// products truncated at total degree `order`, in graded lexicographic order.
///
/// Basis functions are functions of the standard coordinate ξ and are not
/// normalized: E[φ_i φ_j] = h_i δ_ij with h_0 = 1.
class OrthoBasis {
 public:
  OrthoBasis(ParameterDistribution dist, int order);

  const ParameterDistribution& distribution() const { return dist_; }
  int order() const { return order_; }
  /// N + 1.
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& multi_indices() const { return indices_; }
  /// φ_i as polynomials in ξ.
  const std::vector<Polynomial>& polynomials() const { return polys_; }
  const Eigen::VectorXd& norms() const { return norms_; }

  /// Φ(ξ), evaluated with the three-term recurrences.
  Eigen::VectorXd evaluate(const Eigen::VectorXd& standard) const;
  /// Φ at a physical parameter value (maps δ -> ξ first).
  Eigen::VectorXd evaluate_at_parameter(const Eigen::VectorXd& physical) const;
  /// (N+1) x Q table of φ_i at the standard nodes of `rule`.
  Eigen::MatrixXd evaluate_on(const QuadratureRule& rule) const;

 private:
  ParameterDistribution dist_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<Polynomial> polys_;
  Eigen::VectorXd norms_;
};

OrthoBasis build_basis(const ParameterDistribution& dist, int total_order);

/// Coefficients (ascending powers) of the univariate Legendre P_k and
/// probabilists' Hermite He_k polynomials.
std::vector<double> legendre_coefficients(int k);
std::vector<double> hermite_coefficients(int k);

/// E[Φ Φᵀ] by quadrature.
Eigen::MatrixXd gram_matrix(const OrthoBasis& basis, const QuadratureRule& rule);
/// E[Φ].
Eigen::VectorXd basis_mean(const OrthoBasis& basis, const QuadratureRule& rule);
/// Var(Φ) = E[(Φ - Φ̄)(Φ - Φ̄)ᵀ]; diag(0, h_1, .., h_N) up to quadrature error.
Eigen::MatrixXd basis_var_matrix(const OrthoBasis& basis, const QuadratureRule& rule);

/// Linearly independent functions θ_0 .. θ_M spanning every product φ_i φ_j.
/// Each θ_k is itself one of the products (θ_0 = φ_0 φ_0 = 1).
class QuadraticBasis {
 public:
  QuadraticBasis(OrthoBasis parent, std::vector<std::pair<int, int>> pairs, Eigen::MatrixXd product_coefficients,
                 double residual);

  const OrthoBasis& parent() const { return parent_; }
  /// M + 1.
  std::size_t size() const { return pairs_.size(); }
  /// θ_k = φ_i φ_j for pair_map()[k] = (i, j).
  const std::vector<std::pair<int, int>>& pair_map() const { return pairs_; }
  /// θ_k as polynomials in ξ.
  const std::vector<Polynomial>& functions() const { return functions_; }
  /// Row r holds the θ-coordinates of the r-th product in
  /// product_pairs(parent().size()).
  const Eigen::MatrixXd& product_coefficients() const { return coeffs_; }
  /// Largest coefficient-space residual when writing a product φ_i φ_j in
  /// terms of θ, relative to the product's largest coefficient.
  double reconstruction_residual() const { return residual_; }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& standard) const;
  /// (M+1) x Q table at the standard nodes of `rule`.
  Eigen::MatrixXd evaluate_on(const QuadratureRule& rule) const;

 private:
  OrthoBasis parent_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Polynomial> functions_;
  Eigen::MatrixXd coeffs_;
  double residual_;
};

/// All (i, j) with 0 <= i <= j < count, row-major.
std::vector<std::pair<int, int>> product_pairs(std::size_t count);

/// Selects an independent subset of the products φ_i φ_j by pivoted
/// Cholesky on their normalized Gram matrix (φ_0² forced first, relative
/// threshold 1e-10), then expresses every product in the selected set.
QuadraticBasis build_quadratic_basis(const OrthoBasis& basis);

}  // namespace rkf
