#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "rkf/config_loader.hpp"
#include "rkf/config_text.hpp"
#include "rkf/errors.hpp"
#include "support/oracles.hpp"

namespace rkf {
namespace {

using testing::max_abs;
using testing::shipped_config;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

constexpr const char* kMinimal = R"(
[system]
time = "discrete"
A = [[0.5, "d1"], [0, 0.9]]
B = [[1], [0]]
C = [[1, 0]]
Q = [[1]]
R = [[0.5]]

[parameter.d1]
kind = "uniform"
lower = -1
upper = 1
)";

std::string without_line(std::string text, const std::string& prefix) {
  const auto at = text.find(prefix);
  if (at == std::string::npos) return text;
  return text.erase(at, text.find('\n', at) - at + 1);
}

std::string error_of(const std::string& text) {
  try {
    parse_system(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigText, SectionsListsAndComments) {
  const auto doc = parse_config_text("name = \"x\"  # trailing\n[a.b]\nm = [[1, 2],\n     [3, 4]]\ns = \"#not a comment\"\n");
  EXPECT_EQ(as_string(doc.get("", "name"), "name"), "x");
  const auto& m = as_list(doc.get("a.b", "m"), "m");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(as_number(as_list(m[1], "row")[0], "v"), 3.0);
  EXPECT_EQ(as_string(doc.get("a.b", "s"), "s"), "#not a comment");
}

TEST(ConfigText, ErrorsCarryLineNumbers) {
  try {
    parse_config_text("a = 1\nb = [1, 2\nc = 3\n\n[x]\nd = oops\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config_text("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[s]\n[s]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("just text\n"), ConfigError);
}

TEST(ParseSystem, ShippedDtBenchmark) {
  const ParsedConfig cfg = load_config_file(shipped_config("benchmark_dt"));
  const auto& sys = cfg.system;
  EXPECT_EQ(sys.time_mode, TimeMode::Discrete);
  EXPECT_EQ(sys.n(), 2);
  EXPECT_EQ(sys.m(), 1);
  EXPECT_EQ(sys.p(), 1);
  EXPECT_EQ(max_abs(sys.C - (Eigen::MatrixXd(1, 2) << -100, 10).finished()), 0.0);
  EXPECT_EQ(sys.Q(0, 0), 1.0);
  EXPECT_EQ(sys.R(0, 0), 1.0);
  EXPECT_EQ(sys.delta.describe(), "U(-0.3,0.3)");
  EXPECT_EQ(max_abs(eval_A(sys, Eigen::VectorXd::Constant(1, 0.0)) - testing::dt_benchmark(sys.delta).A.evaluate(Eigen::VectorXd::Zero(1))), 0.0);

  const auto& e = cfg.experiment;
  ASSERT_EQ(e.delta_grid.size(), 10u);
  EXPECT_DOUBLE_EQ(e.delta_grid.front()[0], -0.3);
  EXPECT_DOUBLE_EQ(e.delta_grid.back()[0], 0.3);
  EXPECT_EQ(e.seeds.size(), 50u);
  EXPECT_EQ(e.horizon, 200);
  EXPECT_EQ(e.window_begin, 100);
  EXPECT_EQ(e.window_end, 200);
  EXPECT_EQ(max_abs(e.cases[1].initial.mean - Eigen::Vector2d(20, 20)), 0.0);
}

TEST(ParseSystem, ShippedCtBenchmark) {
  const ParsedConfig cfg = load_config_file(shipped_config("benchmark_ct"));
  EXPECT_EQ(cfg.system.time_mode, TimeMode::Continuous);
  EXPECT_EQ(cfg.system.delta.describe(), "U(-0.95,0.95)");
  EXPECT_DOUBLE_EQ(cfg.system.sample_period, 0.1);
  EXPECT_EQ(cfg.experiment.filter.basis_order, 4);
  EXPECT_EQ(max_abs(cfg.experiment.cases[1].initial.mean - Eigen::Vector2d(3, 3)), 0.0);
}

TEST(ParseSystem, DefaultsForOptionalSections) {
  const ParsedConfig cfg = parse_system(kMinimal);
  const auto& e = cfg.experiment;
  EXPECT_EQ(e.horizon, 200);
  EXPECT_EQ(e.window_begin, 100);
  ASSERT_EQ(e.delta_grid.size(), 1u);
  EXPECT_EQ(e.delta_grid[0][0], 0.0);
  EXPECT_EQ(e.seeds, std::vector<std::uint64_t>{1});
  EXPECT_EQ(max_abs(cfg.initial_belief().covariance - Eigen::Matrix2d::Identity()), 0.0);
}

TEST(ParseSystem, RoundTripThroughSerialize) {
  for (const char* name : {"benchmark_dt", "benchmark_ct"}) {
    const ParsedConfig a = load_config_file(shipped_config(name));
    const std::string text = serialize_config(a);
    const ParsedConfig b = parse_system(text);
    EXPECT_EQ(serialize_config(b), text) << name;
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.system.delta.describe(), b.system.delta.describe());
    EXPECT_EQ(max_abs(a.system.C - b.system.C), 0.0);
    for (double d : {-0.2, 0.0, 0.25}) {
      const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, d);
      EXPECT_EQ(max_abs(eval_A(a.system, v) - eval_A(b.system, v)), 0.0);
      EXPECT_EQ(max_abs(eval_B(a.system, v) - eval_B(b.system, v)), 0.0);
    }
    EXPECT_EQ(a.experiment.seeds, b.experiment.seeds);
    ASSERT_EQ(a.experiment.delta_grid.size(), b.experiment.delta_grid.size());
    for (std::size_t i = 0; i < a.experiment.delta_grid.size(); ++i)
      EXPECT_EQ(a.experiment.delta_grid[i], b.experiment.delta_grid[i]);
  }
}

TEST(ParseSystem, MissingKeyIsNamed) {
  const std::string message = error_of(without_line(kMinimal, "Q ="));
  EXPECT_NE(message.find("'Q'"), std::string::npos) << message;
  EXPECT_NE(message.find("[system]"), std::string::npos) << message;
}

TEST(ParseSystem, RejectsInvalidModels) {
  std::string text = kMinimal;
  EXPECT_FALSE(error_of(text.replace(text.find("upper = 1"), 9, "upper = -2")).empty());

  text = kMinimal;
  EXPECT_NE(error_of(text.replace(text.find("R = [[0.5]]"), 11, "R = [[0]]")).find("R must be positive definite"),
            std::string::npos);

  text = kMinimal;
  const std::string bad_poly = error_of(text.replace(text.find("\"d1\""), 4, "\"1 + * d1\""));
  EXPECT_NE(bad_poly.find("[system] A"), std::string::npos) << bad_poly;
  EXPECT_NE(bad_poly.find("line 4"), std::string::npos) << bad_poly;

  text = kMinimal;
  EXPECT_FALSE(error_of(text.replace(text.find("\"uniform\""), 9, "\"beta\"")).empty());

  text = kMinimal;
  EXPECT_FALSE(error_of(text.replace(text.find("[[1], [0]]"), 10, "[[1], [0], [2]]")).empty());

  EXPECT_FALSE(error_of(std::string(kMinimal) + "\n[experiment]\nhorizon = 10\nsteady_state_window = [5, 20]\n").empty());
  EXPECT_FALSE(error_of(std::string(kMinimal) + "\n[case.I]\nmean = [1, 2, 3]\n").empty());
}

TEST(ParseSystem, ExplicitGridAndSeeds) {
  const ParsedConfig cfg = parse_system(std::string(kMinimal) +
                                        "\n[experiment]\ndelta_grid = [-0.5, 0.5]\nseeds = [7, 9, 11]\ncase = \"II\"\n");
  ASSERT_EQ(cfg.experiment.delta_grid.size(), 2u);
  EXPECT_EQ(cfg.experiment.delta_grid[1][0], 0.5);
  EXPECT_EQ(cfg.experiment.seeds, (std::vector<std::uint64_t>{7, 9, 11}));
  EXPECT_EQ(cfg.experiment.case_id, Case::II);
}

TEST(ParseSystem, ContinuousTimeNeedsSamplePeriod) {
  std::string text = kMinimal;
  text.replace(text.find("\"discrete\""), 10, "\"continuous\"");
  EXPECT_NE(error_of(text).find("dt"), std::string::npos);
  text.replace(text.find("time ="), 0, "dt = 0.05\n");
  EXPECT_DOUBLE_EQ(parse_system(text).system.sample_period, 0.05);
}

}  // namespace
}  // namespace rkf
