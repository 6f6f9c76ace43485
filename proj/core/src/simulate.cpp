#include "rkf/simulate.hpp"

#include <variant>

#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"

namespace rkf {

namespace {

struct MarginalSampler {
  CounterRng& rng;
  double operator()(const Uniform& u) const { return u.lower + (u.upper - u.lower) * rng.uniform(); }
  double operator()(const Gaussian& g) const { return g.mean + g.stddev * rng.normal(); }
  double operator()(const PointMass& p) const { return p.value; }
};

Eigen::VectorXd next_delta(const ParameterDistribution& dist, const DeltaSource& source, CounterRng& rng) {
  return source.mode == DeltaMode::FixedPerRun ? source.fixed : sample_parameter(dist, rng);
}

void check_inputs(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, const DeltaSource& delta, int steps) {
  if (steps < 0) throw ConfigError("simulate: negative step count");
  if (x0.size() != sys.n()) throw ConfigError("simulate: x0 has the wrong dimension");
  if (delta.mode == DeltaMode::FixedPerRun && delta.fixed.size() != sys.delta.dims())
    throw ConfigError("simulate: fixed parameter has the wrong dimension");
}

TruthTrajectory allocate(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, int steps) {
  TruthTrajectory t;
  t.states.resize(sys.n(), steps + 1);
  t.states.col(0) = x0;
  t.measurements.resize(sys.p(), steps);
  t.deltas.resize(sys.delta.dims(), steps);
  return t;
}

}  // namespace

Eigen::VectorXd sample_parameter(const ParameterDistribution& dist, CounterRng& rng) {
  Eigen::VectorXd out(dist.dims());
  for (int k = 0; k < dist.dims(); ++k) out[k] = std::visit(MarginalSampler{rng}, dist.marginal(k));
  return out;
}

Eigen::VectorXd sample_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance, CounterRng& rng) {
  return mean + psd_factor(covariance) * rng.normal_vector(mean.size());
}

TruthTrajectory simulate_truth_dt(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, const DeltaSource& delta,
                                  CounterRng& rng, int steps) {
  check_inputs(sys, x0, delta, steps);
  TruthTrajectory t = allocate(sys, x0, steps);
  const Eigen::MatrixXd q_root = psd_factor(sys.Q);
  const Eigen::MatrixXd r_root = psd_factor(sys.R);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd d = next_delta(sys.delta, delta, rng);
    const Eigen::VectorXd w = q_root * rng.normal_vector(sys.m());
    t.states.col(k + 1) = eval_A(sys, d) * t.states.col(k) + eval_B(sys, d) * w;
    t.measurements.col(k) = sys.C * t.states.col(k + 1) + r_root * rng.normal_vector(sys.p());
    t.deltas.col(k) = d;
  }
  return t;
}

TruthTrajectory simulate_truth_ct(const UncertainLinearSystem& sys, const Eigen::VectorXd& x0, const DeltaSource& delta,
                                  CounterRng& rng, int intervals) {
  check_inputs(sys, x0, delta, intervals);
  if (!(sys.sample_period > 0.0)) throw ConfigError("simulate_truth_ct: sample period must be positive");
  TruthTrajectory t = allocate(sys, x0, intervals);
  const Eigen::MatrixXd r_root = psd_factor(sys.R);

  auto discretize = [&](const Eigen::VectorXd& d) {
    const Eigen::MatrixXd B = eval_B(sys, d);
    Discretization disc = van_loan(eval_A(sys, d), B * sys.Q * B.transpose(), sys.sample_period);
    disc.process_noise = psd_factor(disc.process_noise);  // stored as a factor
    return disc;
  };
  std::optional<Discretization> fixed;
  if (delta.mode == DeltaMode::FixedPerRun) fixed = discretize(delta.fixed);

  for (int k = 0; k < intervals; ++k) {
    const Eigen::VectorXd d = next_delta(sys.delta, delta, rng);
    const Discretization disc = fixed ? *fixed : discretize(d);
    t.states.col(k + 1) = disc.transition * t.states.col(k) + disc.process_noise * rng.normal_vector(sys.n());
    t.measurements.col(k) = sys.C * t.states.col(k + 1) + r_root * rng.normal_vector(sys.p());
    t.deltas.col(k) = d;
  }
  return t;
}

}  // namespace rkf
