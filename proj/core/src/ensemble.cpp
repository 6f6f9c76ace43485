#include "rkf/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "rkf/errors.hpp"

namespace rkf {

namespace {

bool contains(const std::vector<FilterKind>& kinds, FilterKind k) {
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

struct RunSpec {
  int delta_index;
  int seed_index;
};

RunTrace execute_run(const ExperimentConfig& cfg, const FilterModel& model, const RunSpec& spec, bool timing) {
  const auto& sys = model.system;
  RunTrace trace;
  trace.delta_index = spec.delta_index;
  trace.seed_index = spec.seed_index;
  trace.seed = cfg.seeds[static_cast<std::size_t>(spec.seed_index)];
  trace.sample_period = sys.time_mode == TimeMode::Continuous ? sys.sample_period : 1.0;

  DeltaSource source = DeltaSource::iid();
  if (cfg.delta_mode == DeltaMode::FixedPerRun) {
    trace.delta = cfg.delta_grid[static_cast<std::size_t>(spec.delta_index)];
    source = DeltaSource::fixed_at(trace.delta);
  }

  CounterRng rng(CounterRng::derive(trace.seed, {static_cast<std::uint64_t>(spec.delta_index)}));
  const CaseSetup& setup = cfg.active_case();
  const Eigen::VectorXd x0 =
      setup.fixed_truth ? *setup.fixed_truth : sample_gaussian(setup.initial.mean, setup.initial.covariance, rng);
  trace.truth = sys.time_mode == TimeMode::Discrete ? simulate_truth_dt(sys, x0, source, rng, cfg.horizon)
                                                    : simulate_truth_ct(sys, x0, source, rng, cfg.horizon);

  const GaussianBelief initial{setup.initial.mean, setup.initial.covariance};
  for (FilterKind kind : cfg.filters) {
    FilterTrace ft;
    ft.filter = kind;
    ft.estimate = Eigen::MatrixXd::Constant(sys.n(), cfg.horizon, std::numeric_limits<double>::quiet_NaN());
    ft.posterior_sd = ft.estimate;
    auto filter = make_filter(model, kind);
    filter->reset(initial);
    const auto start = std::chrono::steady_clock::now();
    try {
      for (int k = 0; k < cfg.horizon; ++k) {
        const GaussianBelief& post = filter->step(trace.truth.measurements.col(k));
        if (!post.finite()) throw NumericalError("non-finite posterior at step " + std::to_string(k));
        ft.estimate.col(k) = post.mean;
        ft.posterior_sd.col(k) = post.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
      }
    } catch (const NumericalError& e) {
      ft.failed = true;
      ft.failure = e.what();
      spdlog::warn("{} filter failed on run (delta {}, seed {}): {}", to_string(kind), spec.delta_index, trace.seed,
                   e.what());
    }
    if (timing)
      ft.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    trace.filters.push_back(std::move(ft));
  }
  return trace;
}

}  // namespace

FilterModel prepare_filters(const UncertainLinearSystem& sys, const FilterSettings& settings,
                            const std::vector<FilterKind>& kinds) {
  FilterModel model;
  model.system = sys;
  model.nominal = nominal_model(sys);
  if (sys.time_mode == TimeMode::Continuous)
    model.substeps = settings.substeps > 0 ? settings.substeps : default_substeps(sys.sample_period);
  if (contains(kinds, FilterKind::Robust)) {
    if (sys.time_mode == TimeMode::Discrete)
      model.dt_tables = std::make_shared<const DtMomentTables>(build_dt_tables(sys, settings.quadrature_points));
    else
      model.galerkin = std::make_shared<const GalerkinOperators>(
          build_galerkin(sys, settings.basis_order, settings.quadrature_points));
  }
  return model;
}

std::unique_ptr<Filter> make_filter(const FilterModel& model, FilterKind kind) {
  const auto& sys = model.system;
  if (sys.time_mode == TimeMode::Discrete) {
    if (kind == FilterKind::Nominal) return std::make_unique<DtNominalFilter>(model.nominal, sys.C, sys.R);
    if (!model.dt_tables) throw ConfigError("make_filter: robust filter was not prepared");
    return std::make_unique<DtRobustFilter>(model.dt_tables, sys.C, sys.R);
  }
  if (kind == FilterKind::Nominal)
    return std::make_unique<CdNominalFilter>(model.nominal, sys.C, sys.R, sys.sample_period, model.substeps);
  if (!model.galerkin) throw ConfigError("make_filter: robust filter was not prepared");
  return std::make_unique<CdRobustFilter>(model.galerkin, sys.C, sys.R, sys.sample_period, model.substeps);
}

Eigen::MatrixXd RunTrace::abs_error(std::size_t f) const {
  const auto K = truth.measurements.cols();
  return (truth.states.rightCols(K) - filters.at(f).estimate).cwiseAbs();
}

const MetricsRow* MetricsTable::find(FilterKind filter, int state) const {
  for (const auto& r : rows)
    if (r.filter == filter && r.state == state) return &r;
  return nullptr;
}

std::pair<int, int> aggregation_window(const ExperimentConfig& cfg) {
  if (cfg.case_id == Case::I) return {cfg.window_begin, cfg.window_end};
  return {0, cfg.horizon};
}

MetricsTable aggregate(const std::vector<RunTrace>& traces, Case case_id, std::pair<int, int> window) {
  MetricsTable table;
  if (traces.empty()) return table;
  const auto [begin, end] = window;
  const auto n = traces.front().truth.states.rows();
  for (std::size_t f = 0; f < traces.front().filters.size(); ++f) {
    const FilterKind kind = traces.front().filters[f].filter;
    for (Eigen::Index i = 0; i < n; ++i) {
      MetricsRow row;
      row.filter = kind;
      row.state = static_cast<int>(i);
      row.case_id = case_id;
      double sum = 0.0;
      long count = 0;
      for (const auto& t : traces) {
        const auto& ft = t.filters.at(f);
        row.wall_ms += ft.wall_ms;
        if (ft.failed) {
          ++row.failures;
          continue;
        }
        ++row.runs;
        const Eigen::MatrixXd err = t.abs_error(f);
        for (int k = begin; k < end; ++k) sum += err(i, k);
        count += end - begin;
      }
      row.mean_abs_err = count > 0 ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
      double sq = 0.0;
      for (const auto& t : traces) {
        if (t.filters.at(f).failed) continue;
        const Eigen::MatrixXd err = t.abs_error(f);
        for (int k = begin; k < end; ++k) sq += (err(i, k) - row.mean_abs_err) * (err(i, k) - row.mean_abs_err);
      }
      row.sd_abs_err = count > 0 ? std::sqrt(sq / static_cast<double>(count)) : std::numeric_limits<double>::quiet_NaN();
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<ErrorBand> error_bands(const std::vector<RunTrace>& traces) {
  std::vector<ErrorBand> bands;
  if (traces.empty()) return bands;
  const auto& first = traces.front();
  const int K = first.steps();
  const auto n = first.truth.states.rows();
  for (std::size_t f = 0; f < first.filters.size(); ++f) {
    std::vector<Eigen::MatrixXd> errors;
    for (const auto& t : traces)
      if (!t.filters.at(f).failed) errors.push_back(t.abs_error(f));
    for (Eigen::Index i = 0; i < n; ++i) {
      ErrorBand b;
      b.filter = first.filters[f].filter;
      b.state = static_cast<int>(i);
      b.runs = static_cast<int>(errors.size());
      b.time.resize(K);
      b.mean = Eigen::VectorXd::Zero(K);
      b.sd = Eigen::VectorXd::Zero(K);
      for (int k = 0; k < K; ++k) {
        b.time[k] = first.time(k);
        if (errors.empty()) continue;
        double s = 0.0;
        for (const auto& e : errors) s += e(i, k);
        const double m = s / static_cast<double>(errors.size());
        double v = 0.0;
        for (const auto& e : errors) v += (e(i, k) - m) * (e(i, k) - m);
        b.mean[k] = m;
        b.sd[k] = std::sqrt(v / static_cast<double>(errors.size()));
      }
      bands.push_back(std::move(b));
    }
  }
  return bands;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg, const UncertainLinearSystem& sys, const RunOptions& options) {
  validate(cfg, sys);
  const FilterModel model = prepare_filters(sys, cfg.filter, cfg.filters);

  std::vector<RunSpec> specs;
  const int grid = cfg.delta_mode == DeltaMode::FixedPerRun ? static_cast<int>(cfg.delta_grid.size()) : 1;
  for (int d = 0; d < grid; ++d)
    for (int s = 0; s < static_cast<int>(cfg.seeds.size()); ++s) specs.push_back({d, s});

  std::vector<RunTrace> traces(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        traces[i] = execute_run(cfg, model, specs[i], options.timing);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = specs.size();
      }
    }
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(specs.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  EnsembleResult result;
  result.metrics = aggregate(traces, cfg.case_id, aggregation_window(cfg));
  result.traces = std::move(traces);
  return result;
}

}  // namespace rkf
