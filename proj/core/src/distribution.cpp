#include "rkf/distribution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rkf/errors.hpp"

namespace rkf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ParameterDistribution::ParameterDistribution(std::vector<Marginal> marginals) : marginals_(std::move(marginals)) {
  if (marginals_.empty()) throw ConfigError("parameter distribution needs at least one dimension");
  for (std::size_t k = 0; k < marginals_.size(); ++k) {
    const auto where = "parameter d" + std::to_string(k + 1) + ": ";
    std::visit(Overloaded{
                   [&](const Uniform& u) {
                     if (!std::isfinite(u.lower) || !std::isfinite(u.upper))
                       throw ConfigError(where + "uniform bounds must be finite");
                     if (!(u.lower < u.upper))
                       throw ConfigError(where + "uniform requires lower < upper (got lower=" + num(u.lower) +
                                         ", upper=" + num(u.upper) + ")");
                   },
                   [&](const Gaussian& g) {
                     if (!std::isfinite(g.mean) || !std::isfinite(g.stddev))
                       throw ConfigError(where + "gaussian parameters must be finite");
                     if (!(g.stddev > 0.0)) throw ConfigError(where + "gaussian requires stddev > 0");
                   },
                   [&](const PointMass& p) {
                     if (!std::isfinite(p.value)) throw ConfigError(where + "point value must be finite");
                   }},
               marginals_[k]);
  }
}

Eigen::VectorXd ParameterDistribution::mean() const {
  Eigen::VectorXd out(dims());
  for (int k = 0; k < dims(); ++k)
    out[k] = std::visit(Overloaded{[](const Uniform& u) { return 0.5 * (u.lower + u.upper); },
                                   [](const Gaussian& g) { return g.mean; },
                                   [](const PointMass& p) { return p.value; }},
                        marginal(k));
  return out;
}

Eigen::VectorXd ParameterDistribution::variance() const {
  Eigen::VectorXd out(dims());
  for (int k = 0; k < dims(); ++k)
    out[k] = std::visit(Overloaded{[](const Uniform& u) { return (u.upper - u.lower) * (u.upper - u.lower) / 12.0; },
                                   [](const Gaussian& g) { return g.stddev * g.stddev; },
                                   [](const PointMass&) { return 0.0; }},
                        marginal(k));
  return out;
}

Eigen::VectorXd ParameterDistribution::center() const { return mean(); }

Eigen::VectorXd ParameterDistribution::scale() const {
  Eigen::VectorXd out(dims());
  for (int k = 0; k < dims(); ++k)
    out[k] = std::visit(Overloaded{[](const Uniform& u) { return 0.5 * (u.upper - u.lower); },
                                   [](const Gaussian& g) { return g.stddev; },
                                   [](const PointMass&) { return 0.0; }},
                        marginal(k));
  return out;
}

Eigen::VectorXd ParameterDistribution::to_physical(const Eigen::VectorXd& standard) const {
  if (standard.size() != dims()) throw ConfigError("parameter point has wrong dimension");
  return center() + scale().cwiseProduct(standard);
}

Eigen::VectorXd ParameterDistribution::to_standard(const Eigen::VectorXd& physical) const {
  if (physical.size() != dims()) throw ConfigError("parameter point has wrong dimension");
  const Eigen::VectorXd s = scale();
  if ((s.array() == 0.0).any()) throw ConfigError("no standard coordinate for a point-mass parameter");
  return (physical - center()).cwiseQuotient(s);
}

double ParameterDistribution::standard_density(const Eigen::VectorXd& standard) const {
  double p = 1.0;
  for (int k = 0; k < dims(); ++k) {
    const double x = standard[k];
    p *= std::visit(Overloaded{[x](const Uniform&) { return std::abs(x) <= 1.0 ? 0.5 : 0.0; },
                               [x](const auto&) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }},
                    marginal(k));
  }
  return p;
}

std::string describe(const Marginal& m) {
  return std::visit(Overloaded{[](const Uniform& u) { return "U(" + num(u.lower) + "," + num(u.upper) + ")"; },
                               [](const Gaussian& g) { return "N(" + num(g.mean) + "," + num(g.stddev) + ")"; },
                               [](const PointMass& p) { return "point(" + num(p.value) + ")"; }},
                    m);
}

std::string ParameterDistribution::describe() const {
  std::string out;
  for (std::size_t k = 0; k < marginals_.size(); ++k) {
    if (k) out += " x ";
    out += rkf::describe(marginals_[k]);
  }
  return out;
}

}  // namespace rkf
