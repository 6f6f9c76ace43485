#include "rkf/experiment.hpp"

#include <algorithm>
#include <cctype>

#include "rkf/errors.hpp"

namespace rkf {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<double> axis_points(const Marginal& m, int count) {
  double lo = 0.0, hi = 0.0;
  if (const auto* u = std::get_if<Uniform>(&m)) {
    lo = u->lower;
    hi = u->upper;
  } else if (const auto* g = std::get_if<Gaussian>(&m)) {
    lo = g->mean - 3.0 * g->stddev;
    hi = g->mean + 3.0 * g->stddev;
  } else {
    return {std::get<PointMass>(m).value};
  }
  if (count == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1.0);
  return out;
}

}  // namespace

std::string to_string(Case c) { return c == Case::I ? "I" : "II"; }
std::string to_string(DeltaMode m) { return m == DeltaMode::FixedPerRun ? "fixed" : "iid"; }
std::string to_string(FilterKind f) { return f == FilterKind::Robust ? "robust" : "nominal"; }

Case parse_case(const std::string& text) {
  const auto t = lower(text);
  if (t == "i" || t == "1") return Case::I;
  if (t == "ii" || t == "2") return Case::II;
  throw ConfigError("unknown case '" + text + "' (expected I or II)");
}

DeltaMode parse_delta_mode(const std::string& text) {
  const auto t = lower(text);
  if (t == "fixed" || t == "fixed_per_run") return DeltaMode::FixedPerRun;
  if (t == "iid" || t == "iid_per_step") return DeltaMode::IidPerStep;
  throw ConfigError("unknown delta_mode '" + text + "' (expected fixed or iid)");
}

FilterKind parse_filter_kind(const std::string& text) {
  const auto t = lower(text);
  if (t == "robust") return FilterKind::Robust;
  if (t == "nominal") return FilterKind::Nominal;
  throw ConfigError("unknown filter '" + text + "' (expected robust or nominal)");
}

std::vector<Eigen::VectorXd> uniform_grid(const ParameterDistribution& dist, int count) {
  if (count < 1) throw ConfigError("delta grid needs at least one point");
  std::vector<std::vector<double>> axes;
  for (const auto& m : dist.marginals()) axes.push_back(axis_points(m, count));
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  std::vector<Eigen::VectorXd> out;
  out.reserve(total);
  for (std::size_t q = 0; q < total; ++q) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(axes.size()));
    std::size_t rest = q;
    for (std::size_t k = axes.size(); k-- > 0;) {
      p[static_cast<Eigen::Index>(k)] = axes[k][rest % axes[k].size()];
      rest /= axes[k].size();
    }
    out.push_back(std::move(p));
  }
  return out;
}

void validate(const ExperimentConfig& cfg, const UncertainLinearSystem& sys) {
  if (cfg.horizon < 1) throw ConfigError("experiment horizon must be >= 1");
  if (cfg.window_begin < 0 || cfg.window_end > cfg.horizon || cfg.window_begin >= cfg.window_end)
    throw ConfigError("steady_state_window [" + std::to_string(cfg.window_begin) + ", " + std::to_string(cfg.window_end) +
                      ") must be a non-empty range inside [0, " + std::to_string(cfg.horizon) + ")");
  if (cfg.delta_mode == DeltaMode::FixedPerRun && cfg.delta_grid.empty())
    throw ConfigError("delta grid must be non-empty in fixed mode");
  for (const auto& d : cfg.delta_grid)
    if (d.size() != sys.delta.dims()) throw ConfigError("delta grid point has wrong dimension");
  if (cfg.seeds.empty()) throw ConfigError("at least one noise seed is required");
  if (cfg.filters.empty()) throw ConfigError("at least one filter must be requested");
  if (cfg.filter.basis_order < 0) throw ConfigError("basis_order must be >= 0");
  if (cfg.filter.quadrature_points < 0) throw ConfigError("quadrature_points must be >= 0");
  if (cfg.filter.substeps < 0) throw ConfigError("substeps must be >= 0");
  for (const auto& c : cfg.cases) {
    const auto n = sys.n();
    if (c.initial.mean.size() != n || c.initial.covariance.rows() != n || c.initial.covariance.cols() != n)
      throw ConfigError("initial mean/covariance must have dimension n = " + std::to_string(n));
    if (c.fixed_truth && c.fixed_truth->size() != n) throw ConfigError("truth_x0 must have dimension n = " + std::to_string(n));
  }
}

}  // namespace rkf
