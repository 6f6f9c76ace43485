#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rkf/uncertain_system.hpp"

namespace rkf::testing {

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// e^M by scaling and squaring of a 30-term Taylor series.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& m) {
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  const Eigen::MatrixXd a = m / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * a / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Moments at time t of ẋ = A x + w, E[w wᵀ] = W, from (mu0, P0).
struct LtiMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};
inline LtiMoments lti_moments(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W, const Eigen::VectorXd& mu0,
                              const Eigen::MatrixXd& P0, double t) {
  const auto n = A.rows();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = A * t;
  aug.topRightCorner(n, n) = W * t;
  aug.bottomRightCorner(n, n) = -A.transpose() * t;
  const Eigen::MatrixXd e = taylor_expm(aug);
  const Eigen::MatrixXd F = e.topLeftCorner(n, n);
  const Eigen::MatrixXd Qd = e.topRightCorner(n, n) * F.transpose();
  LtiMoments out;
  out.mean = F * mu0;
  out.covariance = F * P0 * F.transpose() + 0.5 * (Qd + Qd.transpose());
  return out;
}

/// Textbook Kalman step with an explicit inverse.
struct KfState {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
};
inline KfState reference_kf_update(const KfState& prior, const Eigen::VectorXd& y, const Eigen::MatrixXd& C,
                                   const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd S = C * prior.P * C.transpose() + R;
  const Eigen::MatrixXd K = prior.P * C.transpose() * S.inverse();
  const auto n = prior.P.rows();
  return {prior.x + K * (y - C * prior.x), (Eigen::MatrixXd::Identity(n, n) - K * C) * prior.P};
}

/// Second-order discrete-time benchmark, A(δ) = [[0, -0.5], [1, 1 + δ]].
inline UncertainLinearSystem dt_benchmark(ParameterDistribution delta) {
  UncertainLinearSystem sys;
  sys.time_mode = TimeMode::Discrete;
  const int d = delta.dims();
  sys.A = MatrixPolynomial(2, 2, d);
  sys.A(0, 1) = Polynomial::constant(d, -0.5);
  sys.A(1, 0) = Polynomial::constant(d, 1.0);
  sys.A(1, 1) = Polynomial::constant(d, 1.0) + Polynomial::variable(d, 0);
  sys.B = MatrixPolynomial::constant((Eigen::MatrixXd(2, 1) << -6, 1).finished(), d);
  sys.C = (Eigen::MatrixXd(1, 2) << -100, 10).finished();
  sys.Q = Eigen::MatrixXd::Identity(1, 1);
  sys.R = Eigen::MatrixXd::Identity(1, 1);
  sys.delta = std::move(delta);
  return sys;
}

/// Second-order continuous-time benchmark, A(δ) = [[0, -1 + δ], [1, -0.5]].
inline UncertainLinearSystem ct_benchmark(ParameterDistribution delta, double dt = 0.1) {
  UncertainLinearSystem sys;
  sys.time_mode = TimeMode::Continuous;
  sys.sample_period = dt;
  const int d = delta.dims();
  sys.A = MatrixPolynomial(2, 2, d);
  sys.A(0, 1) = Polynomial::constant(d, -1.0) + Polynomial::variable(d, 0);
  sys.A(1, 0) = Polynomial::constant(d, 1.0);
  sys.A(1, 1) = Polynomial::constant(d, -0.5);
  sys.B = MatrixPolynomial::constant((Eigen::MatrixXd(2, 1) << -2, 1).finished(), d);
  sys.C = (Eigen::MatrixXd(1, 2) << -100, -100).finished();
  sys.Q = Eigen::MatrixXd::Identity(1, 1);
  sys.R = Eigen::MatrixXd::Identity(1, 1);
  sys.delta = std::move(delta);
  return sys;
}

inline std::string shipped_config(const std::string& name) { return std::string(RKF_TEST_CONFIG_DIR) + "/" + name + ".cfg"; }

}  // namespace rkf::testing
