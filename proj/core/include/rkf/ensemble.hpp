#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rkf/cd_filter.hpp"
#include "rkf/dt_filter.hpp"
#include "rkf/experiment.hpp"
#include "rkf/filter.hpp"
#include "rkf/simulate.hpp"
#include "rkf/uncertain_system.hpp"

namespace rkf {

/// Shared, immutable pieces every filter instance of one experiment needs.
struct FilterModel {
  UncertainLinearSystem system;
  int substeps = 1;  // CT only
  std::shared_ptr<const DtMomentTables> dt_tables;
  std::shared_ptr<const GalerkinOperators> galerkin;
  NominalModel nominal;
};

/// Builds only what `kinds` require.
FilterModel prepare_filters(const UncertainLinearSystem& sys, const FilterSettings& settings,
                            const std::vector<FilterKind>& kinds);
std::unique_ptr<Filter> make_filter(const FilterModel& model, FilterKind kind);

struct FilterTrace {
  FilterKind filter = FilterKind::Robust;
  Eigen::MatrixXd estimate;      // n x K posterior means
  Eigen::MatrixXd posterior_sd;  // n x K sqrt(diag Σ⁺)
  bool failed = false;
  std::string failure;
  double wall_ms = 0.0;
};

struct RunTrace {
  int delta_index = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  /// The fixed parameter value; empty for iid runs.
  Eigen::VectorXd delta;
  double sample_period = 1.0;
  TruthTrajectory truth;
  std::vector<FilterTrace> filters;

  int steps() const { return static_cast<int>(truth.measurements.cols()); }
  double time(int step) const { return (step + 1) * sample_period; }
  /// |x_k - μ⁺_k| for filter f, n x K.
  Eigen::MatrixXd abs_error(std::size_t f) const;
};

struct MetricsRow {
  FilterKind filter = FilterKind::Robust;
  int state = 0;  // 0-based
  Case case_id = Case::I;
  double mean_abs_err = 0.0;
  double sd_abs_err = 0.0;
  int runs = 0;
  int failures = 0;
  double wall_ms = 0.0;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;
  /// nullptr if absent.
  const MetricsRow* find(FilterKind filter, int state) const;
};

struct RunOptions {
  /// When false every wall_ms is 0, making outputs byte-reproducible.
  bool timing = true;
};

struct EnsembleResult {
  MetricsTable metrics;
  std::vector<RunTrace> traces;  // ordered by (delta_index, seed_index)
};

/// Runs every (δ, seed) pair (or every seed in iid mode) through every
/// requested filter. Filter failures are recorded, not thrown.
EnsembleResult run_ensemble(const ExperimentConfig& cfg, const UncertainLinearSystem& sys, const RunOptions& options = {});

/// Half-open step window used for aggregation: the configured window for
/// Case I, the whole horizon for Case II.
std::pair<int, int> aggregation_window(const ExperimentConfig& cfg);

/// Mean and population SD of |error| over the window, pooled over runs.
/// Deterministic: accumulation follows trace order.
MetricsTable aggregate(const std::vector<RunTrace>& traces, Case case_id, std::pair<int, int> window);

/// Per-step mean and SD of |error| across runs, for each filter and state.
struct ErrorBand {
  FilterKind filter = FilterKind::Robust;
  int state = 0;
  Eigen::VectorXd time;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  int runs = 0;
};
std::vector<ErrorBand> error_bands(const std::vector<RunTrace>& traces);

}  // namespace rkf
