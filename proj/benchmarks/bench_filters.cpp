#include <benchmark/benchmark.h>

#include "rkf/cd_filter.hpp"
#include "rkf/dt_filter.hpp"
#include "rkf/ortho_basis.hpp"

namespace {

using namespace rkf;

UncertainLinearSystem dt_system() {
  UncertainLinearSystem sys;
  sys.A = MatrixPolynomial(2, 2, 1);
  sys.A(0, 1) = Polynomial::constant(1, -0.5);
  sys.A(1, 0) = Polynomial::constant(1, 1.0);
  sys.A(1, 1) = Polynomial::constant(1, 1.0) + Polynomial::variable(1, 0);
  sys.B = MatrixPolynomial::constant((Eigen::MatrixXd(2, 1) << -6, 1).finished(), 1);
  sys.C = (Eigen::MatrixXd(1, 2) << -100, 10).finished();
  sys.Q = Eigen::MatrixXd::Identity(1, 1);
  sys.R = Eigen::MatrixXd::Identity(1, 1);
  sys.delta = ParameterDistribution::uniform(-0.3, 0.3);
  return sys;
}

UncertainLinearSystem ct_system() {
  UncertainLinearSystem sys;
  sys.time_mode = TimeMode::Continuous;
  sys.sample_period = 0.1;
  sys.A = MatrixPolynomial(2, 2, 1);
  sys.A(0, 1) = Polynomial::constant(1, -1.0) + Polynomial::variable(1, 0);
  sys.A(1, 0) = Polynomial::constant(1, 1.0);
  sys.A(1, 1) = Polynomial::constant(1, -0.5);
  sys.B = MatrixPolynomial::constant((Eigen::MatrixXd(2, 1) << -2, 1).finished(), 1);
  sys.C = (Eigen::MatrixXd(1, 2) << -100, -100).finished();
  sys.Q = Eigen::MatrixXd::Identity(1, 1);
  sys.R = Eigen::MatrixXd::Identity(1, 1);
  sys.delta = ParameterDistribution::uniform(-0.95, 0.95);
  return sys;
}

const GaussianBelief kStart{Eigen::Vector2d(3, 3), Eigen::Matrix2d::Identity()};

void BM_DtRobustStep(benchmark::State& state) {
  const auto sys = dt_system();
  DtRobustFilter f(std::make_shared<const DtMomentTables>(build_dt_tables(sys)), sys.C, sys.R);
  f.reset(kStart);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.step(y));
    if (f.steps() > 1000) f.reset(kStart);
  }
}
BENCHMARK(BM_DtRobustStep);

void BM_DtNominalStep(benchmark::State& state) {
  const auto sys = dt_system();
  DtNominalFilter f(nominal_model(sys), sys.C, sys.R);
  f.reset(kStart);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.step(y));
    if (f.steps() > 1000) f.reset(kStart);
  }
}
BENCHMARK(BM_DtNominalStep);

void BM_CdRobustStep(benchmark::State& state) {
  const auto sys = ct_system();
  auto ops = std::make_shared<const GalerkinOperators>(build_galerkin(sys, static_cast<int>(state.range(0))));
  CdRobustFilter f(ops, sys.C, sys.R, 0.1, 10);
  f.reset(kStart);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.step(y));
    if (f.steps() > 1000) f.reset(kStart);
  }
}
BENCHMARK(BM_CdRobustStep)->DenseRange(1, 4);

void BM_CdNominalStep(benchmark::State& state) {
  const auto sys = ct_system();
  CdNominalFilter f(nominal_model(sys), sys.C, sys.R, 0.1, 10);
  f.reset(kStart);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.step(y));
    if (f.steps() > 1000) f.reset(kStart);
  }
}
BENCHMARK(BM_CdNominalStep);

void BM_BuildGalerkin(benchmark::State& state) {
  const auto sys = ct_system();
  for (auto _ : state) benchmark::DoNotOptimize(build_galerkin(sys, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildGalerkin)->DenseRange(1, 4);

}  // namespace

BENCHMARK_MAIN();
