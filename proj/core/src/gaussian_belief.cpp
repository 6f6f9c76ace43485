#include "rkf/gaussian_belief.hpp"

#include <string>

#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"

namespace rkf {

void check_belief(const GaussianBelief& belief, const char* what, double relative_tol) {
  if (!belief.finite()) throw NumericalError(std::string(what) + ": non-finite mean or covariance");
  if (!is_psd(belief.covariance, relative_tol))
    throw NumericalError(std::string(what) + ": covariance is indefinite (min eigenvalue " +
                         std::to_string(min_eigenvalue(belief.covariance)) + ")");
}

GaussianBelief kalman_update(const GaussianBelief& prior, const Eigen::VectorXd& y, const Eigen::MatrixXd& C,
                             const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd PCt = prior.covariance * C.transpose();
  const Eigen::MatrixXd S = symmetrized(C * PCt + R);
  const Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw NumericalError("kalman_update: innovation covariance is not positive definite");
  // K = P Cᵀ S⁻¹, computed as (S⁻¹ C P)ᵀ.
  const Eigen::MatrixXd K = llt.solve(PCt.transpose()).transpose();

  GaussianBelief post;
  post.mean = prior.mean + K * (y - C * prior.mean);
  const auto n = prior.covariance.rows();
  post.covariance = symmetrized((Eigen::MatrixXd::Identity(n, n) - K * C) * prior.covariance);
  return post;
}

}  // namespace rkf
