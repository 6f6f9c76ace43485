#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rkf/uncertain_system.hpp"

namespace rkf {

/// Case I starts from a zero mean (steady-state error); Case II from a
/// nonzero mean (convergence).
enum class Case { I, II };

/// FixedPerRun holds δ constant over a trajectory (one run per grid value);
/// IidPerStep redraws Δ from p(Δ) every step / interval.
enum class DeltaMode { FixedPerRun, IidPerStep };

enum class FilterKind { Robust, Nominal };

std::string to_string(Case c);
std::string to_string(DeltaMode m);
std::string to_string(FilterKind f);
Case parse_case(const std::string& text);
DeltaMode parse_delta_mode(const std::string& text);
FilterKind parse_filter_kind(const std::string& text);

/// Truth x_0 ~ N(mean, covariance) (or exactly `fixed_truth` when given);
/// every filter starts from the belief (mean, covariance).
struct CaseSetup {
  InitialBelief initial;
  std::optional<Eigen::VectorXd> fixed_truth;
};

/// Numerical settings of the robust filters.
struct FilterSettings {
  /// Polynomial chaos order N of the continuous-discrete filter.
  int basis_order = 4;
  /// Gauss points per parameter dimension; 0 picks the smallest count that
  /// integrates every filter integrand exactly.
  int quadrature_points = 0;
  /// RK4 steps per measurement interval; 0 means ceil(dt / 0.01).
  int substeps = 0;
};

struct ExperimentConfig {
  Case case_id = Case::I;
  std::array<CaseSetup, 2> cases;
  int horizon = 200;
  DeltaMode delta_mode = DeltaMode::FixedPerRun;
  /// Parameter values, one run per entry and seed (FixedPerRun only).
  std::vector<Eigen::VectorXd> delta_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<FilterKind> filters{FilterKind::Robust, FilterKind::Nominal};
  /// Half-open step range [begin, end) used for Case I aggregation. Steps are
  /// numbered 0 .. horizon-1 (step k holds the estimate after measurement k+1).
  int window_begin = 100;
  int window_end = 200;
  FilterSettings filter;
  /// Worker threads for run_ensemble; 0 uses hardware concurrency.
  int threads = 0;

  const CaseSetup& active_case() const { return cases[case_id == Case::I ? 0 : 1]; }
};

/// Throws ConfigError when horizon < 1, the window is empty or outside the
/// horizon, the grid is empty in FixedPerRun mode, no seeds or filters are
/// given, or dimensions disagree with `sys`.
void validate(const ExperimentConfig& cfg, const UncertainLinearSystem& sys);

/// `count` uniformly spaced points spanning each uniform dimension's support
/// (endpoints included), tensorized over dimensions. Gaussian dimensions span
/// mean ± 3 stddev; point masses contribute their value.
std::vector<Eigen::VectorXd> uniform_grid(const ParameterDistribution& dist, int count);

}  // namespace rkf
