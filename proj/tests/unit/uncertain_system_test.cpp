#include <gtest/gtest.h>

#include "rkf/errors.hpp"
#include "rkf/uncertain_system.hpp"
#include "support/oracles.hpp"

namespace rkf {
namespace {

using testing::ct_benchmark;
using testing::dt_benchmark;
using testing::max_abs;

Eigen::VectorXd at(double d) { return Eigen::VectorXd::Constant(1, d); }

TEST(UncertainSystem, DtBenchmarkAtZero) {
  const auto sys = dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  const Eigen::Matrix2d want = (Eigen::Matrix2d() << 0, -0.5, 1, 1).finished();
  EXPECT_EQ(max_abs(eval_A(sys, at(0.0)) - want), 0.0);
  EXPECT_EQ(max_abs(eval_B(sys, at(0.2)) - Eigen::Vector2d(-6, 1)), 0.0);
}

TEST(UncertainSystem, CtBenchmarkAtHalf) {
  const auto sys = ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95));
  const Eigen::Matrix2d want = (Eigen::Matrix2d() << 0, -0.5, 1, -0.5).finished();
  EXPECT_EQ(max_abs(eval_A(sys, at(0.5)) - want), 0.0);
  EXPECT_EQ(max_abs(eval_B(sys, at(-0.7)) - Eigen::Vector2d(-2, 1)), 0.0);
}

TEST(UncertainSystem, MeanA) {
  const auto dt = dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  const auto rule = build_quadrature(dt.delta, 2);
  EXPECT_LT(max_abs(mean_A(dt, rule) - (Eigen::Matrix2d() << 0, -0.5, 1, 1).finished()), 1e-15);

  const auto ct = ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95));
  EXPECT_LT(max_abs(mean_A(ct, build_quadrature(ct.delta, 2)) - (Eigen::Matrix2d() << 0, -1, 1, -0.5).finished()), 1e-15);

  const auto shifted = dt_benchmark(ParameterDistribution::uniform(0.0, 0.6));
  EXPECT_NEAR(mean_A(shifted, build_quadrature(shifted.delta, 1))(1, 1), 1.3, 1e-15);
}

TEST(UncertainSystem, MeanAMatchesNodeAverage) {
  const auto sys = dt_benchmark(ParameterDistribution::gaussian(0.1, 0.2));
  const auto rule = build_quadrature(sys.delta, 3);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) acc += rule.weights[q] * eval_A(sys, rule.nodes.col(q));
  EXPECT_LT(max_abs(acc - mean_A(sys, rule)), 1e-15);
}

TEST(UncertainSystem, DegreeReportsMaxEntry) {
  auto sys = dt_benchmark(ParameterDistribution::uniform(-1, 1));
  EXPECT_EQ(sys.A.degree(), 1);
  EXPECT_EQ(sys.B.degree(), 0);
  sys.B(0, 0) = parse_polynomial("2*d1^3 - 1", 1);
  EXPECT_EQ(sys.parameter_degree(), 3);
}

TEST(UncertainSystem, ValidationErrors) {
  auto sys = dt_benchmark(ParameterDistribution::uniform(-0.3, 0.3));
  EXPECT_NO_THROW(validate(sys));

  auto bad_r = sys;
  bad_r.R = Eigen::MatrixXd::Zero(1, 1);
  try {
    validate(bad_r);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("R must be positive definite"), std::string::npos);
  }

  auto bad_q = sys;
  bad_q.Q = -Eigen::MatrixXd::Identity(1, 1);
  EXPECT_THROW(validate(bad_q), ConfigError);

  auto bad_c = sys;
  bad_c.C = Eigen::MatrixXd::Ones(1, 3);
  EXPECT_THROW(validate(bad_c), ConfigError);

  auto ct = ct_benchmark(ParameterDistribution::uniform(-0.95, 0.95));
  ct.sample_period = 0.0;
  EXPECT_THROW(validate(ct), ConfigError);
}

TEST(ParameterDistribution, RejectsInvalidMarginals) {
  EXPECT_THROW(ParameterDistribution::uniform(1.0, 1.0), ConfigError);
  EXPECT_THROW(ParameterDistribution::uniform(2.0, 1.0), ConfigError);
  EXPECT_THROW(ParameterDistribution::gaussian(0.0, 0.0), ConfigError);
  EXPECT_THROW(ParameterDistribution(std::vector<Marginal>{}), ConfigError);
  EXPECT_EQ(ParameterDistribution::uniform(-0.3, 0.3).describe(), "U(-0.3,0.3)");
}

}  // namespace
}  // namespace rkf
