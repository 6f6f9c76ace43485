#pragma once

#include <Eigen/Dense>

namespace rkf {

/// Mean and covariance of a Gaussian prior or posterior.
struct GaussianBelief {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  int dim() const { return static_cast<int>(mean.size()); }
  bool finite() const { return mean.allFinite() && covariance.allFinite(); }
};

/// Tolerance of the covariance PSD check, relative to the trace.
inline constexpr double kBeliefPsdTolerance = 1e-10;

/// Throws NumericalError when the belief has non-finite entries or an
/// indefinite covariance. `what` names the caller in the message.
void check_belief(const GaussianBelief& belief, const char* what, double relative_tol = kBeliefPsdTolerance);

/// Measurement update with gain K = Σ⁻Cᵀ(CΣ⁻Cᵀ + R)⁻¹; covariance
/// (I - KC)Σ⁻, symmetrized. The innovation covariance is factored by
/// Cholesky. Throws NumericalError if that factorization fails.
GaussianBelief kalman_update(const GaussianBelief& prior, const Eigen::VectorXd& y, const Eigen::MatrixXd& C,
                             const Eigen::MatrixXd& R);

}  // namespace rkf
