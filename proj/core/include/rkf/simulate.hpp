#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rkf/distribution.hpp"
#include "rkf/experiment.hpp"
#include "rkf/rng.hpp"
#include "rkf/uncertain_system.hpp"

namespace rkf {

/// Parameter values fed to the plant: one fixed value for the whole run, or
/// an iid draw from p(Δ) each step (DT) or each interval (CT).
struct DeltaSource {
  DeltaMode mode = DeltaMode::FixedPerRun;
  Eigen::VectorXd fixed;

  static DeltaSource fixed_at(Eigen::VectorXd value) { return {DeltaMode::FixedPerRun, std::move(value)}; }
  static DeltaSource iid() { return {DeltaMode::IidPerStep, {}}; }
};

/// A draw from p(Δ).
Eigen::VectorXd sample_parameter(const ParameterDistribution& dist, CounterRng& rng);
/// A draw from N(mean, covariance); the covariance may be singular.
Eigen::VectorXd sample_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance, CounterRng& rng);

struct TruthTrajectory {
  Eigen::MatrixXd states;        // n x (K+1); column 0 is x_0
  Eigen::MatrixXd measurements;  // p x K; column k is y_{k+1}
  Eigen::MatrixXd deltas;        // d x K; parameter acting on step k
};

/// x_k = A(δ) x_{k-1} + B(δ) w_{k-1}, y_k = C x_k + n_k for k = 1..K.
TruthTrajectory simulate_truth_dt(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, const DeltaSource& delta,
                                  CounterRng& rng, int steps);

/// Exact sampled solution of ẋ = A(δ) x + B(δ) w with δ held over each
/// interval of length sys.sample_period: x(t_k) = e^{A dt} x(t_{k-1}) + N(0, Q_d).
TruthTrajectory simulate_truth_ct(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, const DeltaSource& delta,
                                  CounterRng& rng, int intervals);

}  // namespace rkf
