#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rkf/distribution.hpp"
#include "rkf/polynomial.hpp"
#include "rkf/quadrature.hpp"

namespace rkf {

/// Matrix whose entries are polynomials in the physical parameter δ.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  MatrixPolynomial(int rows, int cols, int dims);
  /// Δ-independent matrix.
  static MatrixPolynomial constant(const Eigen::MatrixXd& value, int dims);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dims() const { return dims_; }
  /// Max total degree over all entries.
  int degree() const;

  Polynomial& operator()(int r, int c) { return entries_[index(r, c)]; }
  const Polynomial& operator()(int r, int c) const { return entries_[index(r, c)]; }

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& delta) const;
  /// E[M(Δ)] under `rule`.
  Eigen::MatrixXd mean(const QuadratureRule& rule) const;

 private:
  std::size_t index(int r, int c) const;

  int rows_ = 0;
  int cols_ = 0;
  int dims_ = 1;
  std::vector<Polynomial> entries_;
};

enum class TimeMode { Discrete, Continuous };

/// x_k = A(Δ) x_{k-1} + B(Δ) w_{k-1} (DT) or ẋ = A(Δ) x + B(Δ) w with Δ held
/// over each measurement interval (CT); y_k = C x_k + n_k.
struct UncertainLinearSystem {
  TimeMode time_mode = TimeMode::Discrete;
  MatrixPolynomial A;  // n x n
  MatrixPolynomial B;  // n x m
  Eigen::MatrixXd C;   // p x n
  Eigen::MatrixXd Q;   // m x m
  Eigen::MatrixXd R;   // p x p
  ParameterDistribution delta;
  /// Measurement interval for CT systems; unused for DT.
  double sample_period = 0.0;

  int n() const { return A.rows(); }
  int m() const { return B.cols(); }
  int p() const { return static_cast<int>(C.rows()); }
  /// Max of deg A and deg B.
  int parameter_degree() const { return std::max(A.degree(), B.degree()); }
};

/// Throws ConfigError unless dimensions agree, Q is symmetric PSD, R is
/// symmetric PD, and sample_period > 0 for CT systems.
void validate(const UncertainLinearSystem& sys);

Eigen::MatrixXd eval_A(const UncertainLinearSystem& sys, const Eigen::VectorXd& delta);
Eigen::MatrixXd eval_B(const UncertainLinearSystem& sys, const Eigen::VectorXd& delta);
/// Ā = E[A(Δ)].
Eigen::MatrixXd mean_A(const UncertainLinearSystem& sys, const QuadratureRule& rule);

/// Prior on the initial state, independent of Δ and noise.
struct InitialBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

}  // namespace rkf
