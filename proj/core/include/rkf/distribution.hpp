#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace rkf {

struct Uniform {
  double lower = -1.0;
  double upper = 1.0;
};

struct Gaussian {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Point mass at `value`. Treated as the stddev -> 0 limit of a Gaussian:
/// its orthogonal family is probabilists' Hermite in a dummy standard
/// variable, while every physical quadrature node sits at `value`.
struct PointMass {
  double value = 0.0;
};

using Marginal = std::variant<Uniform, Gaussian, PointMass>;

/// Independent per-dimension parameter distribution p(Δ).
class ParameterDistribution {
 public:
  ParameterDistribution() = default;
  /// Throws ConfigError on empty input, lower >= upper, stddev <= 0 or
  /// non-finite parameters.
  explicit ParameterDistribution(std::vector<Marginal> marginals);

  static ParameterDistribution uniform(double lower, double upper) { return ParameterDistribution({Uniform{lower, upper}}); }
  static ParameterDistribution gaussian(double mean, double stddev) { return ParameterDistribution({Gaussian{mean, stddev}}); }
  static ParameterDistribution point(double value) { return ParameterDistribution({PointMass{value}}); }

  int dims() const { return static_cast<int>(marginals_.size()); }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const Marginal& marginal(int k) const { return marginals_.at(static_cast<std::size_t>(k)); }

  Eigen::VectorXd mean() const;
  Eigen::VectorXd variance() const;

  /// Affine map between the standard variable ξ and the physical
  /// parameter: δ_k = center_k + scale_k ξ_k. For a point mass scale is 0.
  Eigen::VectorXd center() const;
  Eigen::VectorXd scale() const;
  Eigen::VectorXd to_physical(const Eigen::VectorXd& standard) const;
  /// Inverse map; throws ConfigError for point-mass dimensions.
  Eigen::VectorXd to_standard(const Eigen::VectorXd& physical) const;

  /// Density of the standard variable at ξ (product of marginals).
  /// Point-mass dimensions contribute the standard normal density.
  double standard_density(const Eigen::VectorXd& standard) const;

  /// "U(-0.3,0.3)", "N(0,1)", "point(0)"; dims joined with " x ".
  std::string describe() const;

 private:
  std::vector<Marginal> marginals_;
};

std::string describe(const Marginal& m);

}  // namespace rkf
