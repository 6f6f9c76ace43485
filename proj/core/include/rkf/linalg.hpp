#pragma once

#include <Eigen/Dense>

namespace rkf {

/// (M + Mᵀ) / 2.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

/// Smallest eigenvalue >= -tol * max(trace, 0). An all-zero matrix is PSD.
bool is_psd(const Eigen::MatrixXd& symmetric, double relative_tol);

/// Factor F with F Fᵀ = m for symmetric PSD m (eigenvalues clipped at 0).
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& symmetric);

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& m);

/// Exact zero-order discretization of ẋ = A x + w, E[w wᵀ] = W δ(t - s), over dt:
/// transition e^{A dt} and Q_d = ∫_0^dt e^{A s} W e^{Aᵀ s} ds by Van Loan's
/// augmented exponential.
struct Discretization {
  Eigen::MatrixXd transition;
  Eigen::MatrixXd process_noise;
};
Discretization van_loan(const Eigen::MatrixXd& a, const Eigen::MatrixXd& noise_intensity, double dt);

}  // namespace rkf
