#include <gtest/gtest.h>

#include "rkf/cd_filter.hpp"
#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"
#include "support/oracles.hpp"

namespace rkf {
namespace {

using testing::ct_benchmark;
using testing::max_abs;

const ParameterDistribution kCtDelta = ParameterDistribution::uniform(-0.95, 0.95);

Eigen::MatrixXd block(const Eigen::MatrixXd& m, int i, int j, int n) { return m.block(i * n, j * n, n, n); }

TEST(Galerkin, OrderZeroCollapsesToMeanDynamics) {
  const auto sys = ct_benchmark(kCtDelta);
  const auto ops = build_galerkin(sys, 0);
  const auto rule = build_quadrature(sys.delta, 3);
  const Eigen::MatrixXd Abar = mean_A(sys, rule);
  EXPECT_EQ(ops.phi_count, 1);
  EXPECT_EQ(ops.theta_count, 1);
  EXPECT_LT(max_abs(ops.A_mu - Abar), 1e-15);
  EXPECT_LT(max_abs(ops.S - Abar), 1e-15);
  const Eigen::Vector2d B(-2, 1);
  EXPECT_LT(max_abs(ops.T - B * B.transpose()), 1e-14);
}

TEST(Galerkin, FirstOrderCouplingBlocks) {
  // φ_1 = δ / 0.95, so E[φ_0 φ_1 A] = E[δ²] / 0.95 e_1 e_2ᵀ = (0.95 / 3) e_1 e_2ᵀ.
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 1);
  Eigen::Matrix2d unit = Eigen::Matrix2d::Zero();
  unit(0, 1) = 1.0;
  EXPECT_LT(max_abs(block(ops.A_mu, 0, 1, 2) - (0.95 / 3.0) * unit), 1e-14);
  EXPECT_LT(max_abs(block(ops.A_mu, 1, 0, 2) - 0.95 * unit), 1e-14);
  const Eigen::Matrix2d Abar = (Eigen::Matrix2d() << 0, -1, 1, -0.5).finished();
  EXPECT_LT(max_abs(block(ops.A_mu, 0, 0, 2) - Abar), 1e-14);
  EXPECT_LT(max_abs(block(ops.A_mu, 1, 1, 2) - Abar), 1e-14);
}

TEST(Galerkin, PointMassIsBlockDiagonal) {
  const auto sys = ct_benchmark(ParameterDistribution::point(0.0));
  const auto ops = build_galerkin(sys, 3);
  const Eigen::MatrixXd A = eval_A(sys, Eigen::VectorXd::Zero(1));
  for (int i = 0; i < ops.phi_count; ++i)
    for (int j = 0; j < ops.phi_count; ++j)
      EXPECT_LT(max_abs(block(ops.A_mu, i, j, 2) - (i == j ? A : Eigen::MatrixXd::Zero(2, 2))), 1e-12) << i << "," << j;
}

TEST(Galerkin, OperatorInvariants) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 4);
  EXPECT_EQ(ops.phi_count, 5);
  EXPECT_EQ(ops.theta_count, 9);
  EXPECT_EQ(default_cd_points(ct_benchmark(kCtDelta), 4), 18);
  EXPECT_LT(max_abs(ops.G_theta - ops.G_theta.transpose()), 1e-14);
  EXPECT_GT(min_eigenvalue(ops.G_theta), 0.0);
  EXPECT_LT(max_abs(ops.G_theta * ops.G_theta_inv - Eigen::MatrixXd::Identity(9, 9)), 1e-8);
  EXPECT_LT(max_abs(ops.phi_mean - Eigen::VectorXd::Unit(5, 0)), 1e-14);
  EXPECT_EQ(default_substeps(0.1), 10);
  EXPECT_EQ(default_substeps(0.015), 2);
}

TEST(Lift, StacksPosteriorIntoZerothBlocks) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 2);
  const GaussianBelief b{Eigen::Vector2d(3, 3), (Eigen::Matrix2d() << 1, 0.2, 0.2, 2).finished()};
  const PceState s = lift(ops, b);
  const Eigen::VectorXd want = (Eigen::VectorXd(6) << 3, 3, 0, 0, 0, 0).finished();
  EXPECT_EQ(s.mu_pc, want);
  EXPECT_EQ(s.sigma_pc.rows(), 2 * ops.theta_count);
  EXPECT_EQ(max_abs(s.sigma_pc.topRows(2) - b.covariance), 0.0);
  EXPECT_EQ(max_abs(s.sigma_pc.bottomRows(s.sigma_pc.rows() - 2)), 0.0);

  const GaussianBelief back = reconstruct_prior(ops, s);
  EXPECT_LT(max_abs(back.mean - b.mean), 1e-14);
  EXPECT_LT(max_abs(back.covariance - b.covariance), 1e-14);

  const PceState zero = lift(ops, {Eigen::Vector2d(1, 0), Eigen::Matrix2d::Zero()});
  EXPECT_EQ(max_abs(zero.sigma_pc), 0.0);
}

TEST(IntegratePce, FirstOrderTermFromZeroState) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 2);
  const PceState zero = lift(ops, {Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero()});
  const Eigen::Vector2d B(-2, 1);
  for (double dt : {1e-2, 1e-3}) {
    const PceState s = integrate_pce(ops, zero, dt, 1);
    // Block 0 of G⁻¹ ⊗ I applied to T; T_j = E[θ_j] B Q Bᵀ here.
    Eigen::Matrix2d first = Eigen::Matrix2d::Zero();
    for (int j = 0; j < ops.theta_count; ++j) first += ops.G_theta_inv(0, j) * ops.T.block(2 * j, 0, 2, 2);
    EXPECT_LT(max_abs(s.sigma_pc.topRows(2) - dt * first), 10 * dt * dt * max_abs(first));
    EXPECT_LT(max_abs(first - B * B.transpose()), 1e-8);
  }
}

TEST(IntegratePce, PointMassMatchesLyapunov) {
  const auto sys = ct_benchmark(ParameterDistribution::point(0.3));
  const auto ops = build_galerkin(sys, 4);
  const GaussianBelief b{Eigen::Vector2d(3, 3), Eigen::Matrix2d::Identity()};
  const GaussianBelief robust = reconstruct_prior(ops, integrate_pce(ops, lift(ops, b), 1.0, 100));
  const GaussianBelief nominal = nominal_ct_propagate(nominal_model(sys), b, 1.0, 100);
  EXPECT_LT(max_abs(robust.mean - nominal.mean), 1e-8);
  EXPECT_LT(max_abs(robust.covariance - nominal.covariance), 1e-8);

  const auto exact = testing::lti_moments(eval_A(sys, Eigen::VectorXd::Constant(1, 0.3)),
                                          nominal_model(sys).BQBt, b.mean, b.covariance, 1.0);
  EXPECT_LT(max_abs(nominal.covariance - exact.covariance), 1e-7);
}

TEST(IntegratePce, ConditionalMeanAtNodes) {
  const auto sys = ct_benchmark(kCtDelta);
  const auto ops = build_galerkin(sys, 4);
  const Eigen::Vector2d mu0(3, 3);
  const PceState s = integrate_pce(ops, lift(ops, {mu0, Eigen::Matrix2d::Identity()}), 1.0, 100);
  for (Eigen::Index q = 0; q < ops.rule.nodes.cols(); ++q) {
    const Eigen::VectorXd want = testing::taylor_expm(eval_A(sys, ops.rule.nodes.col(q))) * mu0;
    EXPECT_LT(max_abs(conditional_mean(ops, s, ops.rule.standard_nodes.col(q)) - want), 1e-6) << "node " << q;
  }
}

TEST(IntegratePce, LinearInMean) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 3);
  const PceState a = integrate_pce(ops, lift(ops, {Eigen::Vector2d(1, -2), Eigen::Matrix2d::Identity()}), 0.1, 10);
  const PceState b = integrate_pce(ops, lift(ops, {Eigen::Vector2d(2, -4), Eigen::Matrix2d::Identity()}), 0.1, 10);
  EXPECT_LT(max_abs(b.mu_pc - 2.0 * a.mu_pc), 1e-15 * max_abs(a.mu_pc) * 10);
}

TEST(IntegratePce, RejectsBadArguments) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 1);
  const PceState s = lift(ops, {Eigen::Vector2d(1, 1), Eigen::Matrix2d::Identity()});
  EXPECT_THROW(integrate_pce(ops, s, 0.0, 1), ConfigError);
  EXPECT_THROW(integrate_pce(ops, s, 0.1, 0), ConfigError);
  PceState bad = s;
  bad.mu_pc[0] = std::numeric_limits<double>::infinity();
  try {
    integrate_pce(ops, bad, 0.1, 2, 17);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 17"), std::string::npos) << e.what();
  }
}

TEST(ReconstructPrior, FirstCoefficientAddsSpread) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 2);
  PceState s = lift(ops, {Eigen::Vector2d::Zero(), Eigen::Matrix2d::Zero()});
  const Eigen::Vector2d mu1(0.5, -1.5);
  s.mu_pc.segment(2, 2) = mu1;
  const GaussianBelief prior = reconstruct_prior(ops, s);
  EXPECT_LT(max_abs(prior.covariance - ops.phi_norms[1] * mu1 * mu1.transpose()), 1e-14);
  EXPECT_NEAR(ops.phi_norms[1], 1.0 / 3.0, 1e-15);
  EXPECT_LT(max_abs(prior.mean), 1e-15);

  // Oracle: spread of the conditional mean μ(δ) = φ_1(δ) μ_1 over δ, by sampling.
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  const int samples = 20001;
  for (int i = 0; i < samples; ++i) {
    const double xi = -1.0 + 2.0 * (i + 0.5) / samples;
    acc += (xi * mu1) * (xi * mu1).transpose();
  }
  EXPECT_LT(max_abs(prior.covariance - acc / samples), 1e-6);
}

TEST(ReconstructPrior, RejectsIndefinite) {
  const auto ops = build_galerkin(ct_benchmark(kCtDelta), 1);
  PceState s = lift(ops, {Eigen::Vector2d::Zero(), -Eigen::Matrix2d::Identity()});
  EXPECT_THROW(reconstruct_prior(ops, s), NumericalError);
}

TEST(CdStep, ContractChecks) {
  const auto sys = ct_benchmark(kCtDelta);
  const auto ops = build_galerkin(sys, 4);
  const GaussianBelief b{Eigen::Vector2d(3, 3), Eigen::Matrix2d::Identity()};
  const GaussianBelief prior = reconstruct_prior(ops, integrate_pce(ops, lift(ops, b), 0.1, 10));
  const GaussianBelief post = cd_step(ops, b, Eigen::VectorXd::Constant(1, -550.0), 0.1, 10, sys.C, sys.R);
  EXPECT_TRUE(post.finite());
  EXPECT_GE(min_eigenvalue(post.covariance), -1e-10 * post.covariance.trace());
  EXPECT_LT(post.covariance.trace(), prior.covariance.trace());

  const GaussianBelief vague = cd_step(ops, b, Eigen::VectorXd::Constant(1, 7.0), 0.1, 10, sys.C,
                                       Eigen::MatrixXd::Constant(1, 1, 1e14));
  EXPECT_LT(max_abs(vague.mean - prior.mean), 1e-6);
}

TEST(CdStep, PointMassMatchesNominalHybridKf) {
  const auto sys = ct_benchmark(ParameterDistribution::point(0.0));
  const auto ops = std::make_shared<const GalerkinOperators>(build_galerkin(sys, 4));
  CdRobustFilter robust(ops, sys.C, sys.R, 0.1, 10);
  CdNominalFilter nominal(nominal_model(sys), sys.C, sys.R, 0.1, 10);
  const GaussianBelief b{Eigen::Vector2d(3, 3), Eigen::Matrix2d::Identity()};
  robust.reset(b);
  nominal.reset(b);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 10.0 * std::sin(0.3 * k));
    robust.step(y);
    nominal.step(y);
    EXPECT_LT(max_abs(robust.posterior().mean - nominal.posterior().mean), 1e-8);
    EXPECT_LT(max_abs(robust.posterior().covariance - nominal.posterior().covariance), 1e-8);
  }
}

}  // namespace
}  // namespace rkf
