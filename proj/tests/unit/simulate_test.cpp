#include <cmath>

#include <gtest/gtest.h>

#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"
#include "rkf/simulate.hpp"
#include "support/oracles.hpp"

namespace rkf {
namespace {

using testing::max_abs;

UncertainLinearSystem noiseless(UncertainLinearSystem sys) {
  sys.Q = Eigen::MatrixXd::Zero(1, 1);
  sys.R = Eigen::MatrixXd::Constant(1, 1, 1e-300);
  return sys;
}

TEST(CounterRng, StreamsArePureFunctionsOfKeyAndCounter) {
  CounterRng a(CounterRng::derive(7, {3})), b(CounterRng::derive(7, {3})), c(CounterRng::derive(7, {4}));
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  EXPECT_NE(CounterRng::derive(1, {}), CounterRng::derive(2, {}));
  EXPECT_NE(CounterRng::derive(1, {0, 1}), CounterRng::derive(1, {1, 0}));
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(12345);
  const int n = 200000;
  double su = 0, suu = 0, sn = 0, snn = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    suu += u * u;
    const double z = rng.normal();
    sn += z;
    snn += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(suu / n - 0.25, 1.0 / 12, 0.002);
  EXPECT_NEAR(sn / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(snn / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4 * std::sqrt(96.0 / n));
}

TEST(SampleParameter, StaysInSupportWithRightMoments) {
  CounterRng rng(9);
  const auto dist = ParameterDistribution::uniform(-0.3, 0.3);
  double s = 0, ss = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double d = sample_parameter(dist, rng)[0];
    ASSERT_GE(d, -0.3);
    ASSERT_LE(d, 0.3);
    s += d;
    ss += d * d;
  }
  EXPECT_NEAR(s / n, 0.0, 4 * std::sqrt(0.03 / n));
  EXPECT_NEAR(ss / n, 0.03, 0.001);
  EXPECT_EQ(sample_parameter(ParameterDistribution::point(0.25), rng)[0], 0.25);
}

TEST(SampleGaussian, HandlesSingularCovariance) {
  CounterRng rng(4);
  const Eigen::Matrix2d cov = (Eigen::Matrix2d() << 1, 1, 1, 1).finished();
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = sample_gaussian(Eigen::Vector2d(3, 3), cov, rng);
    EXPECT_NEAR(x[0], x[1], 1e-12);
  }
}

TEST(SimulateDt, NoiselessStepFollowsTheModel) {
  const auto sys = noiseless(testing::dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3)));
  CounterRng rng(1);
  const auto t = simulate_truth_dt(sys, Eigen::Vector2d(1, 0), DeltaSource::fixed_at(Eigen::VectorXd::Constant(1, 0.2)),
                                   rng, 3);
  EXPECT_EQ(t.states.cols(), 4);
  EXPECT_EQ(t.measurements.cols(), 3);
  EXPECT_LT(max_abs(t.states.col(1) - Eigen::Vector2d(0, 1)), 1e-15);
  EXPECT_LT(max_abs(t.states.col(2) - Eigen::Vector2d(-0.5, 1.2)), 1e-15);
  EXPECT_NEAR(t.measurements(0, 0), 10.0, 1e-12);
  EXPECT_EQ(t.deltas(0, 2), 0.2);
}

TEST(SimulateDt, DeterministicPerKey) {
  const auto sys = testing::dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  CounterRng a(77), b(77);
  const auto ta = simulate_truth_dt(sys, Eigen::Vector2d(0, 0), DeltaSource::iid(), a, 50);
  const auto tb = simulate_truth_dt(sys, Eigen::Vector2d(0, 0), DeltaSource::iid(), b, 50);
  EXPECT_EQ(ta.states, tb.states);
  EXPECT_EQ(ta.measurements, tb.measurements);
  EXPECT_GT(max_abs(ta.deltas.rightCols(49) - ta.deltas.leftCols(49)), 0.0);
}

TEST(SimulateDt, ProcessNoiseCovariance) {
  // One step from x = 0: x_1 = B w, so Cov(x_1) = B Q Bᵀ = [[36, -6], [-6, 1]].
  const auto sys = testing::dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  const int n = 1000000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  CounterRng rng(2024);
  const auto src = DeltaSource::fixed_at(Eigen::VectorXd::Zero(1));
  for (int i = 0; i < n; ++i) {
    const auto t = simulate_truth_dt(sys, Eigen::Vector2d::Zero(), src, rng, 1);
    acc += t.states.col(1) * t.states.col(1).transpose();
  }
  acc /= n;
  const Eigen::Matrix2d want = (Eigen::Matrix2d() << 36, -6, -6, 1).finished();
  EXPECT_LT(((acc - want).array().abs() / want.array().abs()).maxCoeff(), 0.01);
}

TEST(SimulateDt, RejectsBadInput) {
  const auto sys = testing::dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  CounterRng rng(1);
  EXPECT_THROW(simulate_truth_dt(sys, Eigen::Vector3d::Zero(), DeltaSource::iid(), rng, 2), ConfigError);
  EXPECT_THROW(simulate_truth_dt(sys, Eigen::Vector2d::Zero(), DeltaSource::fixed_at(Eigen::Vector2d::Zero()), rng, 2),
               ConfigError);
  EXPECT_THROW(simulate_truth_dt(sys, Eigen::Vector2d::Zero(), DeltaSource::iid(), rng, -1), ConfigError);
}

TEST(VanLoan, OrnsteinUhlenbeckVariance) {
  // ẋ = -x + w, E[w wᵀ] = 1: variance after dt from 0 is (1 - e^{-2dt}) / 2.
  for (double dt : {0.01, 0.1, 1.0}) {
    const auto d = van_loan(Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Identity(1, 1), dt);
    EXPECT_NEAR(d.transition(0, 0), std::exp(-dt), 1e-14);
    EXPECT_NEAR(d.process_noise(0, 0), 0.5 * (1 - std::exp(-2 * dt)), 1e-14);
  }
  const auto z = van_loan(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2), 0.1);
  EXPECT_LT(max_abs(z.process_noise - 0.1 * Eigen::MatrixXd::Identity(2, 2)), 1e-15);
}

TEST(VanLoan, MatchesTaylorReference) {
  const auto sys = testing::ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95));
  for (double delta : {-0.95, 0.0, 0.6}) {
    const Eigen::MatrixXd A = eval_A(sys, Eigen::VectorXd::Constant(1, delta));
    const Eigen::MatrixXd W = (Eigen::Matrix2d() << 4, -2, -2, 1).finished();
    const auto d = van_loan(A, W, 0.1);
    EXPECT_LT(max_abs(d.transition - testing::taylor_expm(A * 0.1)), 1e-12);
    const auto ref = testing::lti_moments(A, W, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero(), 0.1);
    EXPECT_LT(max_abs(d.process_noise - ref.covariance), 1e-12);
  }
}

TEST(SimulateCt, NoiselessMatchesExponential) {
  const auto sys = noiseless(testing::ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95)));
  CounterRng rng(5);
  const auto src = DeltaSource::fixed_at(Eigen::VectorXd::Constant(1, 0.5));
  const auto t = simulate_truth_ct(sys, Eigen::Vector2d(3, 3), src, rng, 10);
  const Eigen::MatrixXd F = testing::taylor_expm(eval_A(sys, src.fixed) * 1.0);
  EXPECT_LT(max_abs(t.states.col(10) - F * Eigen::Vector2d(3, 3)), 1e-12);
}

TEST(SimulateCt, IidDrawsChangeTheParameter) {
  const auto sys = testing::ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95));
  CounterRng rng(6);
  const auto t = simulate_truth_ct(sys, Eigen::Vector2d(0, 0), DeltaSource::iid(), rng, 20);
  EXPECT_GT(t.deltas.maxCoeff() - t.deltas.minCoeff(), 0.1);
  EXPECT_LE(t.deltas.cwiseAbs().maxCoeff(), 0.95);
  EXPECT_TRUE(t.states.allFinite());
}

}  // namespace
}  // namespace rkf
