#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rkf/ensemble.hpp"

namespace rkf {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Columns: filter,state,case,mean_abs_err,sd_abs_err,runs,wall_ms.
/// States are written 1-based as x1, x2, ...
void write_metrics_csv(const std::filesystem::path& path, const MetricsTable& table);
/// Throws ConfigError on a header or field mismatch.
MetricsTable read_metrics_csv(const std::filesystem::path& path);

/// Metrics plus run bookkeeping (config name, grid, seeds, failures).
void write_metrics_json(const std::filesystem::path& path, const MetricsTable& table, const std::string& config_name,
                        const ExperimentConfig& cfg, const std::vector<RunTrace>& traces);

/// "trace_<delta index>_<seed>.csv", or "trace_iid_<seed>.csv".
std::string trace_filename(const RunTrace& trace);

/// One row per step, filter and state.
/// Columns: step,time,filter,state,truth,estimate,posterior_sd,abs_err.
void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace);

struct TraceRow {
  int step = 0;
  double time = 0.0;
  FilterKind filter = FilterKind::Robust;
  int state = 0;  // 0-based
  double truth = 0.0;
  double estimate = 0.0;
  double posterior_sd = 0.0;
  double abs_err = 0.0;
};
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// Columns: filter,state,step,time,mean_abs_err,sd_abs_err,runs.
void write_bands_csv(const std::filesystem::path& path, const std::vector<ErrorBand>& bands);

/// Human-readable table: one row per filter, mean and SD per state.
std::string format_metrics_table(const MetricsTable& table);

}  // namespace rkf
