#include "rkf/results_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "rkf/errors.hpp"

namespace rkf {

namespace {

constexpr const char* kMetricsHeader = "filter,state,case,mean_abs_err,sd_abs_err,runs,wall_ms";
constexpr const char* kTraceHeader = "step,time,filter,state,truth,estimate,posterior_sd,abs_err";
constexpr const char* kBandsHeader = "filter,state,step,time,mean_abs_err,sd_abs_err,runs";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError(where + ": not a number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError(where + ": not an integer '" + s + "'");
  return v;
}

std::string state_name(int state) { return "x" + std::to_string(state + 1); }

int parse_state(const std::string& s, const std::string& where) {
  if (s.size() < 2 || s[0] != 'x') throw ConfigError(where + ": bad state '" + s + "'");
  return parse_int(s.substr(1), where) - 1;
}

struct CsvReader {
  std::filesystem::path path;
  std::ifstream in;
  int line_no = 0;

  CsvReader(const std::filesystem::path& p, const char* header) : path(p), in(p) {
    if (!in) throw ConfigError("cannot read " + p.string());
    std::string line;
    if (!next(line) || line != header)
      throw ConfigError(p.string() + ": schema mismatch, expected header '" + std::string(header) + "'");
  }

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  std::vector<std::string> fields(const std::string& line, std::size_t expected) const {
    auto f = split(line);
    if (f.size() != expected)
      throw ConfigError(where() + ": schema mismatch, expected " + std::to_string(expected) + " fields");
    return f;
  }

  std::string where() const { return path.string() + ":" + std::to_string(line_no); }
};

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsTable& table) {
  auto out = open_out(path);
  out << kMetricsHeader << '\n';
  for (const auto& r : table.rows)
    out << to_string(r.filter) << ',' << state_name(r.state) << ',' << to_string(r.case_id) << ','
        << format_double(r.mean_abs_err) << ',' << format_double(r.sd_abs_err) << ',' << r.runs << ','
        << format_double(r.wall_ms) << '\n';
  finish(out, path);
}

MetricsTable read_metrics_csv(const std::filesystem::path& path) {
  CsvReader reader(path, kMetricsHeader);
  MetricsTable table;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 7);
    const auto at = reader.where();
    MetricsRow r;
    try {
      r.filter = parse_filter_kind(f[0]);
      r.case_id = parse_case(f[2]);
    } catch (const ConfigError& e) {
      throw ConfigError(at + ": " + e.what());
    }
    r.state = parse_state(f[1], at);
    r.mean_abs_err = parse_double(f[3], at);
    r.sd_abs_err = parse_double(f[4], at);
    r.runs = parse_int(f[5], at);
    r.wall_ms = parse_double(f[6], at);
    table.rows.push_back(r);
  }
  return table;
}

void write_metrics_json(const std::filesystem::path& path, const MetricsTable& table, const std::string& config_name,
                        const ExperimentConfig& cfg, const std::vector<RunTrace>& traces) {
  using nlohmann::json;
  json doc;
  doc["config"] = config_name;
  doc["case"] = to_string(cfg.case_id);
  doc["horizon"] = cfg.horizon;
  doc["delta_mode"] = to_string(cfg.delta_mode);
  const auto [begin, end] = aggregation_window(cfg);
  doc["window"] = {begin, end};
  json grid = json::array();
  if (cfg.delta_mode == DeltaMode::FixedPerRun)
    for (const auto& d : cfg.delta_grid) grid.push_back(std::vector<double>(d.data(), d.data() + d.size()));
  doc["delta_grid"] = grid;
  doc["seeds"] = cfg.seeds;
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"filter", to_string(r.filter)},
                    {"state", state_name(r.state)},
                    {"case", to_string(r.case_id)},
                    {"mean_abs_err", r.mean_abs_err},
                    {"sd_abs_err", r.sd_abs_err},
                    {"runs", r.runs},
                    {"failures", r.failures},
                    {"wall_ms", r.wall_ms}});
  doc["metrics"] = rows;
  json failures = json::array();
  for (const auto& t : traces)
    for (const auto& f : t.filters)
      if (f.failed)
        failures.push_back({{"filter", to_string(f.filter)}, {"delta_index", t.delta_index}, {"seed", t.seed},
                            {"message", f.failure}});
  doc["failures"] = failures;
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

std::string trace_filename(const RunTrace& trace) {
  const std::string delta = trace.delta.size() > 0 ? std::to_string(trace.delta_index) : std::string("iid");
  return "trace_" + delta + "_" + std::to_string(trace.seed) + ".csv";
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
  auto out = open_out(path);
  out << kTraceHeader << '\n';
  const int K = trace.steps();
  const auto n = trace.truth.states.rows();
  for (int k = 0; k < K; ++k)
    for (std::size_t f = 0; f < trace.filters.size(); ++f) {
      const auto& ft = trace.filters[f];
      for (Eigen::Index i = 0; i < n; ++i) {
        const double truth = trace.truth.states(i, k + 1);
        const double est = ft.estimate(i, k);
        out << (k + 1) << ',' << format_double(trace.time(k)) << ',' << to_string(ft.filter) << ','
            << state_name(static_cast<int>(i)) << ',' << format_double(truth) << ',' << format_double(est) << ','
            << format_double(ft.posterior_sd(i, k)) << ',' << format_double(std::abs(truth - est)) << '\n';
      }
    }
  finish(out, path);
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  CsvReader reader(path, kTraceHeader);
  std::vector<TraceRow> rows;
  std::string line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 8);
    const auto at = reader.where();
    TraceRow r;
    r.step = parse_int(f[0], at);
    r.time = parse_double(f[1], at);
    try {
      r.filter = parse_filter_kind(f[2]);
    } catch (const ConfigError& e) {
      throw ConfigError(at + ": " + e.what());
    }
    r.state = parse_state(f[3], at);
    r.truth = parse_double(f[4], at);
    r.estimate = parse_double(f[5], at);
    r.posterior_sd = parse_double(f[6], at);
    r.abs_err = parse_double(f[7], at);
    rows.push_back(r);
  }
  return rows;
}

void write_bands_csv(const std::filesystem::path& path, const std::vector<ErrorBand>& bands) {
  auto out = open_out(path);
  out << kBandsHeader << '\n';
  for (const auto& b : bands)
    for (Eigen::Index k = 0; k < b.mean.size(); ++k)
      out << to_string(b.filter) << ',' << state_name(b.state) << ',' << (k + 1) << ',' << format_double(b.time[k])
          << ',' << format_double(b.mean[k]) << ',' << format_double(b.sd[k]) << ',' << b.runs << '\n';
  finish(out, path);
}

std::string format_metrics_table(const MetricsTable& table) {
  std::map<int, bool> states;
  std::vector<FilterKind> filters;
  for (const auto& r : table.rows) {
    states[r.state] = true;
    if (std::find(filters.begin(), filters.end(), r.filter) == filters.end()) filters.push_back(r.filter);
  }
  std::string out = fmt::format("{:<10}", "Filter");
  for (const auto& [s, _] : states) out += fmt::format(" | {:>12} {:>12}", state_name(s) + " mean", state_name(s) + " SD");
  out += fmt::format(" | {:>6} {:>10}\n", "runs", "wall ms");
  out += std::string(out.size() - 1, '-') + "\n";
  for (FilterKind f : filters) {
    out += fmt::format("{:<10}", to_string(f));
    int runs = 0;
    double wall = 0.0;
    for (const auto& [s, _] : states) {
      const MetricsRow* r = table.find(f, s);
      if (!r) {
        out += fmt::format(" | {:>12} {:>12}", "-", "-");
        continue;
      }
      out += fmt::format(" | {:>12.4f} {:>12.4f}", r->mean_abs_err, r->sd_abs_err);
      runs = r->runs;
      wall = r->wall_ms;
    }
    out += fmt::format(" | {:>6} {:>10.1f}\n", runs, wall);
  }
  return out;
}

}  // namespace rkf
