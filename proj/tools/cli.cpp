#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rkf/config_loader.hpp"
#include "rkf/ensemble.hpp"
#include "rkf/errors.hpp"
#include "rkf/results_io.hpp"

#ifndef RKF_CONFIG_DIR
#define RKF_CONFIG_DIR "configs"
#endif

namespace rkf::cli {

namespace fs = std::filesystem;

namespace {

struct RunOverrides {
  std::string config;
  std::string case_id;
  int seeds = 0;
  int order = -1;
  int horizon = 0;
  int threads = -1;
  std::string output;
  bool no_timing = false;
  bool no_traces = false;
};

struct CompareOptions {
  std::string baseline;
  std::string candidate;
  std::string baseline_filter;
  std::string candidate_filter;
  double tolerance = 0.05;
  std::string watch = "both";
};

void setup_logging(int verbosity) {
  if (!spdlog::get("rkf")) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("rkf"));
    spdlog::set_pattern("[%l] %v");
  }
  spdlog::set_level(verbosity >= 2 ? spdlog::level::debug : verbosity == 1 ? spdlog::level::info : spdlog::level::warn);
}

int cmd_validate(const std::string& config, std::ostream& out) {
  const fs::path path = resolve_config(config);
  const ParsedConfig cfg = load_config_file(path);
  const auto& sys = cfg.system;
  out << "OK: " << (sys.time_mode == TimeMode::Discrete ? "DT" : "CT") << " system, n=" << sys.n()
      << ", δ ~ " << sys.delta.describe() << "\n";
  out << "  m=" << sys.m() << ", p=" << sys.p() << ", deg A=" << sys.A.degree() << ", deg B=" << sys.B.degree();
  if (sys.time_mode == TimeMode::Continuous) out << ", dt=" << format_double(sys.sample_period);
  out << "\n";
  const auto& e = cfg.experiment;
  out << "  case " << to_string(e.case_id) << ", horizon " << e.horizon << ", " << to_string(e.delta_mode) << ", "
      << e.delta_grid.size() << " grid point(s) x " << e.seeds.size() << " seed(s)\n";
  return kOk;
}

void apply_overrides(ParsedConfig& cfg, const RunOverrides& o) {
  auto& e = cfg.experiment;
  if (!o.case_id.empty()) e.case_id = parse_case(o.case_id);
  if (o.seeds > 0) {
    const std::uint64_t base = e.seeds.empty() ? 1 : e.seeds.front();
    e.seeds.clear();
    for (int i = 0; i < o.seeds; ++i) e.seeds.push_back(base + static_cast<std::uint64_t>(i));
  }
  if (o.order >= 0) e.filter.basis_order = o.order;
  if (o.horizon > 0) {
    e.horizon = o.horizon;
    e.window_begin = o.horizon / 2;
    e.window_end = o.horizon;
  }
  if (o.threads >= 0) e.threads = o.threads;
  validate(e, cfg.system);
}

int cmd_run(const RunOverrides& o, std::ostream& out) {
  const fs::path path = resolve_config(o.config);
  ParsedConfig cfg = load_config_file(path);
  apply_overrides(cfg, o);
  const auto& e = cfg.experiment;
  const std::string name = cfg.name.empty() ? path.stem().string() : cfg.name;

  const fs::path dir = o.output.empty() ? fs::path("results") / (name + "_case" + to_string(e.case_id)) : fs::path(o.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  spdlog::info("running {}: case {}, {} run(s), horizon {}", name, to_string(e.case_id),
               (e.delta_mode == DeltaMode::FixedPerRun ? e.delta_grid.size() : 1) * e.seeds.size(), e.horizon);
  RunOptions options;
  options.timing = !o.no_timing;
  const EnsembleResult result = run_ensemble(e, cfg.system, options);

  write_metrics_csv(dir / "metrics.csv", result.metrics);
  write_metrics_json(dir / "metrics.json", result.metrics, name, e, result.traces);
  write_bands_csv(dir / "bands.csv", error_bands(result.traces));
  if (!o.no_traces)
    for (const auto& t : result.traces) write_trace_csv(dir / trace_filename(t), t);

  const auto [begin, end] = aggregation_window(e);
  out << fmt::format("{} ({} system), case {}, |error| over steps [{}, {}) of {}\n", name,
                     cfg.system.time_mode == TimeMode::Discrete ? "DT" : "CT", to_string(e.case_id), begin, end,
                     e.horizon);
  out << format_metrics_table(result.metrics);
  out << "results written to " << dir.string() << "\n";

  int failures = 0;
  for (const auto& r : result.metrics.rows) failures += r.failures;
  if (failures > 0) {
    spdlog::error("{} filter run(s) failed numerically; see metrics.json", failures / std::max(1, cfg.system.n()));
    return kNumericalError;
  }
  return kOk;
}

using CellKey = std::pair<std::string, int>;  // filter, state

std::map<CellKey, MetricsRow> select_rows(const MetricsTable& table, const std::string& filter) {
  std::map<CellKey, MetricsRow> out;
  for (const auto& r : table.rows) {
    if (!filter.empty() && to_string(r.filter) != filter) continue;
    out[{filter.empty() ? to_string(r.filter) : std::string(), r.state}] = r;
  }
  return out;
}

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  if (o.watch != "mean" && o.watch != "sd" && o.watch != "both")
    throw ConfigError("--watch must be mean, sd or both");
  if (!(o.tolerance >= 0.0)) throw ConfigError("--tolerance must be non-negative");
  if (o.baseline_filter.empty() != o.candidate_filter.empty())
    throw ConfigError("--baseline-filter and --candidate-filter must be given together");
  if (!o.baseline_filter.empty()) {
    parse_filter_kind(o.baseline_filter);
    parse_filter_kind(o.candidate_filter);
  }
  const MetricsTable base = read_metrics_csv(o.baseline);
  const MetricsTable cand = read_metrics_csv(o.candidate);
  const auto b = select_rows(base, o.baseline_filter);
  const auto c = select_rows(cand, o.candidate_filter);

  std::set<CellKey> bk, ck;
  for (const auto& [k, _] : b) bk.insert(k);
  for (const auto& [k, _] : c) ck.insert(k);
  if (b.empty() || bk != ck)
    throw ConfigError("schema mismatch: the two metrics files do not cover the same filter/state cells");

  out << fmt::format("{:<15} {:<6} {:<5} {:>14} {:>14} {:>14} {:>9}\n", "filter", "state", "stat", "baseline",
                     "candidate", "delta", "ratio");
  int regressions = 0;
  for (const auto& [key, br] : b) {
    const MetricsRow& cr = c.at(key);
    const std::string label =
        o.baseline_filter.empty() ? key.first : o.candidate_filter + "/" + o.baseline_filter;
    const std::pair<const char*, std::pair<double, double>> stats[] = {
        {"mean", {br.mean_abs_err, cr.mean_abs_err}}, {"sd", {br.sd_abs_err, cr.sd_abs_err}}};
    for (const auto& [stat, values] : stats) {
      const auto [bv, cv] = values;
      const double ratio = bv != 0.0 ? cv / bv : (cv == 0.0 ? 1.0 : INFINITY);
      const bool watched = o.watch == "both" || o.watch == stat;
      const bool regressed = watched && (std::isnan(cv) || cv - bv > o.tolerance * std::abs(bv));
      regressions += regressed;
      out << fmt::format("{:<15} x{:<5} {:<5} {:>14.6g} {:>14.6g} {:>14.6g} {:>9.4f}{}\n", label, key.second + 1, stat,
                         bv, cv, cv - bv, ratio, regressed ? "  REGRESSION" : "");
    }
  }
  if (regressions > 0) {
    out << regressions << " cell(s) regressed beyond tolerance " << format_double(o.tolerance) << "\n";
    return kRegression;
  }
  out << "no regressions (tolerance " << format_double(o.tolerance) << ")\n";
  return kOk;
}

}  // namespace

fs::path resolve_config(const std::string& name_or_path) {
  const fs::path given(name_or_path);
  if (fs::exists(given)) return given;
  for (const fs::path candidate : {fs::path(RKF_CONFIG_DIR) / (name_or_path + ".cfg"), fs::path(RKF_CONFIG_DIR) / given})
    if (fs::exists(candidate)) return candidate;
  throw ConfigError("config not found: " + name_or_path);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust Kalman filtering benchmarks for linear systems with random parameters", "rkf"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More log output (repeat for debug)");

  std::string validate_config;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a config");
  validate_cmd->add_option("config", validate_config, "Config file or shipped config name")->required();

  RunOverrides run;
  auto* run_cmd = app.add_subcommand("run", "Run the filter ensemble of a config");
  run_cmd->add_option("config", run.config, "Config file or shipped config name")->required();
  run_cmd->add_option("--case", run.case_id, "Override the case (I or II)");
  run_cmd->add_option("--seeds", run.seeds, "Use this many noise seeds")->check(CLI::PositiveNumber);
  run_cmd->add_option("--order", run.order, "Polynomial chaos order of the CT robust filter")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--horizon", run.horizon, "Steps (DT) or intervals (CT); window becomes the second half")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("-o,--output", run.output, "Output directory");
  run_cmd->add_flag("--no-timing", run.no_timing, "Write wall_ms = 0 so outputs are byte-reproducible");
  run_cmd->add_flag("--no-traces", run.no_traces, "Skip per-run trace files");

  CompareOptions cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two metrics.csv files");
  compare_cmd->add_option("baseline", cmp.baseline, "Baseline metrics.csv")->required();
  compare_cmd->add_option("candidate", cmp.candidate, "Candidate metrics.csv")->required();
  compare_cmd->add_option("--baseline-filter", cmp.baseline_filter, "Compare this filter of the baseline ...");
  compare_cmd->add_option("--candidate-filter", cmp.candidate_filter, "... against this filter of the candidate");
  compare_cmd->add_option("--tolerance", cmp.tolerance, "Allowed relative increase before a cell regresses");
  compare_cmd->add_option("--watch", cmp.watch, "Statistics that can regress: mean, sd or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  setup_logging(verbosity);
  try {
    if (*validate_cmd) return cmd_validate(validate_config, out);
    if (*run_cmd) return cmd_run(run, out);
    if (*compare_cmd) return cmd_compare(cmp, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace rkf::cli
