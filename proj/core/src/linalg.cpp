#include "rkf/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "rkf/errors.hpp"

namespace rkf {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXd& symmetric, double relative_tol) {
  const double scale = std::max(symmetric.trace(), 0.0);
  return min_eigenvalue(symmetric) >= -relative_tol * scale;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(symmetric));
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m.exp();
  if (!out.allFinite()) throw NumericalError("matrix exponential produced non-finite values");
  return out;
}

Discretization van_loan(const Eigen::MatrixXd& a, const Eigen::MatrixXd& noise_intensity, double dt) {
  const auto n = a.rows();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = -a * dt;
  aug.topRightCorner(n, n) = noise_intensity * dt;
  aug.bottomRightCorner(n, n) = a.transpose() * dt;
  const Eigen::MatrixXd e = matrix_exp(aug);
  Discretization out;
  out.transition = e.bottomRightCorner(n, n).transpose();
  out.process_noise = symmetrized(out.transition * e.topRightCorner(n, n));
  return out;
}

}  // namespace rkf
