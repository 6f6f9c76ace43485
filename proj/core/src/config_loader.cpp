#include "rkf/config_loader.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rkf/config_text.hpp"
#include "rkf/errors.hpp"

namespace rkf {

namespace {

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

std::vector<std::vector<ConfigValue>> rows_of(const ConfigValue& v, const std::string& at) {
  std::vector<std::vector<ConfigValue>> rows;
  for (const auto& row : as_list(v, at)) rows.push_back(as_list(row, at + " (matrix rows must be lists)"));
  if (rows.empty() || rows.front().empty()) throw ConfigError(at + ": matrix must be non-empty");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw ConfigError(at + ": matrix rows have different lengths (line " + std::to_string(v.line) + ")");
  return rows;
}

Eigen::MatrixXd read_matrix(const ConfigDocument& doc, const std::string& section, const std::string& key) {
  const auto at = where(section, key);
  const auto rows = rows_of(doc.get(section, key), at);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_number(rows[r][c], at);
  return m;
}

MatrixPolynomial read_matrix_polynomial(const ConfigDocument& doc, const std::string& section, const std::string& key,
                                        int dims) {
  const auto at = where(section, key);
  const auto rows = rows_of(doc.get(section, key), at);
  MatrixPolynomial m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), dims);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& v = rows[r][c];
      auto& entry = m(static_cast<int>(r), static_cast<int>(c));
      if (v.kind == ConfigValue::Kind::Number) {
        entry = Polynomial::constant(dims, v.number);
      } else if (v.kind == ConfigValue::Kind::String) {
        try {
          entry = parse_polynomial(v.text, dims);
        } catch (const ConfigError& e) {
          throw ConfigError(at + " entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") line " +
                            std::to_string(v.line) + ": " + e.what());
        }
      } else {
        throw ConfigError(at + ": entries must be numbers or polynomial strings (line " + std::to_string(v.line) + ")");
      }
    }
  return m;
}

Eigen::VectorXd read_vector(const ConfigValue& v, const std::string& at) {
  const auto& items = as_list(v, at);
  Eigen::VectorXd out(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) out[static_cast<Eigen::Index>(i)] = as_number(items[i], at);
  return out;
}

ParameterDistribution read_parameters(const ConfigDocument& doc) {
  std::vector<Marginal> marginals;
  for (int k = 1;; ++k) {
    const auto section = "parameter.d" + std::to_string(k);
    if (!doc.has_section(section)) break;
    const auto kind = as_string(doc.get(section, "kind"), where(section, "kind"));
    auto num = [&](const char* key) { return as_number(doc.get(section, key), where(section, key)); };
    if (kind == "uniform") {
      marginals.emplace_back(Uniform{num("lower"), num("upper")});
    } else if (kind == "gaussian" || kind == "normal") {
      marginals.emplace_back(Gaussian{num("mean"), num("stddev")});
    } else if (kind == "point") {
      marginals.emplace_back(PointMass{num("value")});
    } else {
      throw ConfigError(where(section, "kind") + ": unsupported distribution kind '" + kind +
                        "' (expected uniform, gaussian or point)");
    }
  }
  for (const auto& name : doc.section_order())
    if (name.rfind("parameter.", 0) == 0) {
      bool known = false;
      for (std::size_t k = 1; k <= marginals.size(); ++k) known |= name == "parameter.d" + std::to_string(k);
      if (!known) throw ConfigError("section [" + name + "]: parameters must be named d1, d2, ... without gaps");
    }
  if (marginals.empty()) throw ConfigError("missing section [parameter.d1]");
  return ParameterDistribution(std::move(marginals));
}

TimeMode read_time_mode(const std::string& text) {
  if (text == "DT" || text == "discrete") return TimeMode::Discrete;
  if (text == "CT" || text == "continuous") return TimeMode::Continuous;
  throw ConfigError("[system] time: expected \"discrete\" or \"continuous\" (got \"" + text + "\")");
}

CaseSetup read_case(const ConfigDocument& doc, const std::string& section, int n) {
  CaseSetup c;
  c.initial.mean = Eigen::VectorXd::Zero(n);
  c.initial.covariance = Eigen::MatrixXd::Identity(n, n);
  if (!doc.has_section(section)) return c;
  if (const auto* v = doc.find(section, "mean")) c.initial.mean = read_vector(*v, where(section, "mean"));
  if (doc.has(section, "covariance")) c.initial.covariance = read_matrix(doc, section, "covariance");
  if (const auto* v = doc.find(section, "truth_x0")) c.fixed_truth = read_vector(*v, where(section, "truth_x0"));
  const auto& P = c.initial.covariance;
  if (P.rows() != P.cols() || (P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, P.cwiseAbs().maxCoeff()))
    throw ConfigError(where(section, "covariance") + ": must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, P.trace()))
    throw ConfigError(where(section, "covariance") + ": must be positive semidefinite");
  return c;
}

void read_experiment(const ConfigDocument& doc, ParsedConfig& out) {
  auto& e = out.experiment;
  const int n = out.system.n();
  e.cases[0] = read_case(doc, "case.I", n);
  e.cases[1] = read_case(doc, "case.II", n);

  const std::string s = "experiment";
  if (const auto* v = doc.find(s, "case")) e.case_id = parse_case(as_string(*v, where(s, "case")));
  if (const auto* v = doc.find(s, "horizon")) e.horizon = as_int(*v, where(s, "horizon"));
  if (const auto* v = doc.find(s, "delta_mode")) e.delta_mode = parse_delta_mode(as_string(*v, where(s, "delta_mode")));

  e.delta_grid.clear();
  if (const auto* v = doc.find(s, "delta_grid")) {
    if (v->kind == ConfigValue::Kind::Number) {
      e.delta_grid = uniform_grid(out.system.delta, as_int(*v, where(s, "delta_grid")));
    } else {
      for (const auto& item : as_list(*v, where(s, "delta_grid"))) {
        if (item.kind == ConfigValue::Kind::Number)
          e.delta_grid.push_back(Eigen::VectorXd::Constant(1, item.number));
        else
          e.delta_grid.push_back(read_vector(item, where(s, "delta_grid")));
      }
    }
  } else {
    e.delta_grid = {out.system.delta.mean()};
  }

  std::uint64_t base_seed = 1;
  if (const auto* v = doc.find(s, "base_seed")) base_seed = static_cast<std::uint64_t>(as_int(*v, where(s, "base_seed")));
  e.seeds.clear();
  if (const auto* v = doc.find(s, "seeds")) {
    if (v->kind == ConfigValue::Kind::Number) {
      const int count = as_int(*v, where(s, "seeds"));
      for (int i = 0; i < count; ++i) e.seeds.push_back(base_seed + static_cast<std::uint64_t>(i));
    } else {
      for (const auto& item : as_list(*v, where(s, "seeds")))
        e.seeds.push_back(static_cast<std::uint64_t>(as_int(item, where(s, "seeds"))));
    }
  } else {
    e.seeds = {base_seed};
  }

  if (const auto* v = doc.find(s, "filters")) {
    e.filters.clear();
    for (const auto& item : as_list(*v, where(s, "filters"))) e.filters.push_back(parse_filter_kind(as_string(item, where(s, "filters"))));
  }

  e.window_begin = e.horizon / 2;
  e.window_end = e.horizon;
  if (const auto* v = doc.find(s, "steady_state_window")) {
    const auto w = read_vector(*v, where(s, "steady_state_window"));
    if (w.size() != 2) throw ConfigError(where(s, "steady_state_window") + ": expected [begin, end]");
    e.window_begin = static_cast<int>(w[0]);
    e.window_end = static_cast<int>(w[1]);
  }
  if (const auto* v = doc.find(s, "threads")) e.threads = as_int(*v, where(s, "threads"));

  const std::string f = "filter";
  if (const auto* v = doc.find(f, "basis_order")) e.filter.basis_order = as_int(*v, where(f, "basis_order"));
  if (const auto* v = doc.find(f, "quadrature_points")) e.filter.quadrature_points = as_int(*v, where(f, "quadrature_points"));
  if (const auto* v = doc.find(f, "substeps")) e.filter.substeps = as_int(*v, where(f, "substeps"));
}

ConfigValue matrix_value(const Eigen::MatrixXd& m) {
  std::vector<ConfigValue> rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<ConfigValue> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(ConfigValue::of(m(r, c)));
    rows.push_back(ConfigValue::list(std::move(row)));
  }
  return ConfigValue::list(std::move(rows));
}

ConfigValue vector_value(const Eigen::VectorXd& v) {
  std::vector<ConfigValue> items;
  for (Eigen::Index i = 0; i < v.size(); ++i) items.push_back(ConfigValue::of(v[i]));
  return ConfigValue::list(std::move(items));
}

ConfigValue matrix_polynomial_value(const MatrixPolynomial& m) {
  std::vector<ConfigValue> rows;
  for (int r = 0; r < m.rows(); ++r) {
    std::vector<ConfigValue> row;
    for (int c = 0; c < m.cols(); ++c) {
      const auto& p = m(r, c);
      row.push_back(p.degree() == 0 ? ConfigValue::of(p.is_zero() ? 0.0 : p.coefficients().front())
                                    : ConfigValue::of(p.to_string()));
    }
    rows.push_back(ConfigValue::list(std::move(row)));
  }
  return ConfigValue::list(std::move(rows));
}

}  // namespace

ParsedConfig parse_system(const std::string& text) {
  const ConfigDocument doc = parse_config_text(text);
  ParsedConfig out;
  if (const auto* v = doc.find("", "name")) out.name = as_string(*v, "name");

  auto& sys = out.system;
  sys.time_mode = read_time_mode(as_string(doc.get("system", "time"), where("system", "time")));
  sys.delta = read_parameters(doc);
  const int dims = sys.delta.dims();
  sys.A = read_matrix_polynomial(doc, "system", "A", dims);
  sys.B = read_matrix_polynomial(doc, "system", "B", dims);
  sys.C = read_matrix(doc, "system", "C");
  sys.Q = read_matrix(doc, "system", "Q");
  sys.R = read_matrix(doc, "system", "R");
  if (sys.time_mode == TimeMode::Continuous) sys.sample_period = as_number(doc.get("system", "dt"), where("system", "dt"));
  validate(sys);

  read_experiment(doc, out);
  validate(out.experiment, sys);
  return out;
}

ParsedConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const ParsedConfig& config) {
  ConfigDocument doc;
  const auto& sys = config.system;
  const auto& e = config.experiment;
  if (!config.name.empty()) doc.set("", "name", ConfigValue::of(config.name));

  doc.set("system", "time", ConfigValue::of(std::string(sys.time_mode == TimeMode::Discrete ? "discrete" : "continuous")));
  if (sys.time_mode == TimeMode::Continuous) doc.set("system", "dt", ConfigValue::of(sys.sample_period));
  doc.set("system", "A", matrix_polynomial_value(sys.A));
  doc.set("system", "B", matrix_polynomial_value(sys.B));
  doc.set("system", "C", matrix_value(sys.C));
  doc.set("system", "Q", matrix_value(sys.Q));
  doc.set("system", "R", matrix_value(sys.R));

  for (int k = 0; k < sys.delta.dims(); ++k) {
    const auto section = "parameter.d" + std::to_string(k + 1);
    const auto& m = sys.delta.marginal(k);
    if (const auto* u = std::get_if<Uniform>(&m)) {
      doc.set(section, "kind", ConfigValue::of(std::string("uniform")));
      doc.set(section, "lower", ConfigValue::of(u->lower));
      doc.set(section, "upper", ConfigValue::of(u->upper));
    } else if (const auto* g = std::get_if<Gaussian>(&m)) {
      doc.set(section, "kind", ConfigValue::of(std::string("gaussian")));
      doc.set(section, "mean", ConfigValue::of(g->mean));
      doc.set(section, "stddev", ConfigValue::of(g->stddev));
    } else {
      doc.set(section, "kind", ConfigValue::of(std::string("point")));
      doc.set(section, "value", ConfigValue::of(std::get<PointMass>(m).value));
    }
  }

  doc.set("filter", "basis_order", ConfigValue::of(e.filter.basis_order));
  doc.set("filter", "quadrature_points", ConfigValue::of(e.filter.quadrature_points));
  doc.set("filter", "substeps", ConfigValue::of(e.filter.substeps));

  doc.set("experiment", "case", ConfigValue::of(to_string(e.case_id)));
  doc.set("experiment", "horizon", ConfigValue::of(e.horizon));
  doc.set("experiment", "delta_mode", ConfigValue::of(to_string(e.delta_mode)));
  std::vector<ConfigValue> grid;
  for (const auto& d : e.delta_grid) grid.push_back(vector_value(d));
  doc.set("experiment", "delta_grid", ConfigValue::list(std::move(grid)));
  std::vector<ConfigValue> seeds;
  for (auto s : e.seeds) seeds.push_back(ConfigValue::of(static_cast<double>(s)));
  doc.set("experiment", "seeds", ConfigValue::list(std::move(seeds)));
  std::vector<ConfigValue> filters;
  for (auto f : e.filters) filters.push_back(ConfigValue::of(to_string(f)));
  doc.set("experiment", "filters", ConfigValue::list(std::move(filters)));
  doc.set("experiment", "steady_state_window",
          ConfigValue::list({ConfigValue::of(e.window_begin), ConfigValue::of(e.window_end)}));
  doc.set("experiment", "threads", ConfigValue::of(e.threads));

  const char* names[] = {"case.I", "case.II"};
  for (int i = 0; i < 2; ++i) {
    const auto& c = e.cases[static_cast<std::size_t>(i)];
    doc.set(names[i], "mean", vector_value(c.initial.mean));
    doc.set(names[i], "covariance", matrix_value(c.initial.covariance));
    if (c.fixed_truth) doc.set(names[i], "truth_x0", vector_value(*c.fixed_truth));
  }
  return format_config_text(doc);
}

}  // namespace rkf
