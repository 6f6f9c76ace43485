#include "rkf/ortho_basis.hpp"

#include <cmath>

#include "rkf/errors.hpp"

namespace rkf {

std::vector<double> legendre_coefficients(int k) {
  std::vector<double> p0{1.0};
  if (k == 0) return p0;
  std::vector<double> p1{0.0, 1.0};
  for (int j = 1; j < k; ++j) {
    // (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
    std::vector<double> p2(static_cast<std::size_t>(j + 2), 0.0);
    for (std::size_t e = 0; e < p1.size(); ++e) p2[e + 1] += (2.0 * j + 1.0) * p1[e];
    for (std::size_t e = 0; e < p0.size(); ++e) p2[e] -= j * p0[e];
    for (double& c : p2) c /= (j + 1.0);
    p0 = std::move(p1);
    p1 = std::move(p2);
  }
  return p1;
}

std::vector<double> hermite_coefficients(int k) {
  std::vector<double> h0{1.0};
  if (k == 0) return h0;
  std::vector<double> h1{0.0, 1.0};
  for (int j = 1; j < k; ++j) {
    // He_{j+1} = x He_j - j He_{j-1}
    std::vector<double> h2(static_cast<std::size_t>(j + 2), 0.0);
    for (std::size_t e = 0; e < h1.size(); ++e) h2[e + 1] += h1[e];
    for (std::size_t e = 0; e < h0.size(); ++e) h2[e] -= j * h0[e];
    h0 = std::move(h1);
    h1 = std::move(h2);
  }
  return h1;
}

namespace {

bool is_legendre(const Marginal& m) { return std::holds_alternative<Uniform>(m); }

double univariate_norm(const Marginal& m, int k) {
  if (is_legendre(m)) return 1.0 / (2.0 * k + 1.0);
  return std::tgamma(k + 1.0);
}

// Values of the univariate family at x for degrees 0..order.
void univariate_values(const Marginal& m, double x, int order, double* out) {
  out[0] = 1.0;
  if (order == 0) return;
  out[1] = x;
  for (int j = 1; j < order; ++j) {
    out[j + 1] = is_legendre(m) ? ((2.0 * j + 1.0) * x * out[j] - j * out[j - 1]) / (j + 1.0) : x * out[j] - j * out[j - 1];
  }
}

}  // namespace

OrthoBasis::OrthoBasis(ParameterDistribution dist, int order) : dist_(std::move(dist)), order_(order) {
  if (order < 0) throw ConfigError("basis order must be >= 0");
  const int d = dist_.dims();
  indices_ = graded_monomials(d, order);
  norms_.resize(static_cast<Eigen::Index>(indices_.size()));
  polys_.reserve(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    Polynomial phi = Polynomial::constant(d, 1.0);
    double h = 1.0;
    for (int k = 0; k < d; ++k) {
      const int deg = indices_[i][static_cast<std::size_t>(k)];
      const auto& m = dist_.marginal(k);
      const auto c = is_legendre(m) ? legendre_coefficients(deg) : hermite_coefficients(deg);
      Polynomial factor(d);
      MultiIndex alpha(static_cast<std::size_t>(d), 0);
      for (std::size_t e = 0; e < c.size(); ++e) {
        alpha[static_cast<std::size_t>(k)] = static_cast<int>(e);
        factor += Polynomial::monomial(alpha, c[e]);
      }
      phi = phi * factor;
      h *= univariate_norm(m, deg);
    }
    polys_.push_back(std::move(phi));
    norms_[static_cast<Eigen::Index>(i)] = h;
  }
}

OrthoBasis build_basis(const ParameterDistribution& dist, int total_order) { return OrthoBasis(dist, total_order); }

Eigen::VectorXd OrthoBasis::evaluate(const Eigen::VectorXd& standard) const {
  const int d = dist_.dims();
  if (standard.size() != d) throw ConfigError("basis evaluated at point of wrong dimension");
  const auto stride = static_cast<std::size_t>(order_ + 1);
  std::vector<double> table(static_cast<std::size_t>(d) * stride);
  for (int k = 0; k < d; ++k)
    univariate_values(dist_.marginal(k), standard[k], order_, table.data() + static_cast<std::size_t>(k) * stride);
  Eigen::VectorXd out(static_cast<Eigen::Index>(indices_.size()));
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    double v = 1.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) v *= table[k * stride + static_cast<std::size_t>(indices_[i][k])];
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

Eigen::VectorXd OrthoBasis::evaluate_at_parameter(const Eigen::VectorXd& physical) const {
  return evaluate(dist_.to_standard(physical));
}

Eigen::MatrixXd OrthoBasis::evaluate_on(const QuadratureRule& rule) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(rule.size()));
  for (Eigen::Index q = 0; q < out.cols(); ++q) out.col(q) = evaluate(rule.standard_nodes.col(q));
  return out;
}

Eigen::MatrixXd gram_matrix(const OrthoBasis& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXd P = basis.evaluate_on(rule);
  return P * rule.weights.asDiagonal() * P.transpose();
}

Eigen::VectorXd basis_mean(const OrthoBasis& basis, const QuadratureRule& rule) {
  return basis.evaluate_on(rule) * rule.weights;
}

Eigen::MatrixXd basis_var_matrix(const OrthoBasis& basis, const QuadratureRule& rule) {
  const Eigen::MatrixXd P = basis.evaluate_on(rule);
  const Eigen::VectorXd mean = P * rule.weights;
  const Eigen::MatrixXd centered = P.colwise() - mean;
  Eigen::MatrixXd var = centered * rule.weights.asDiagonal() * centered.transpose();
  return 0.5 * (var + var.transpose());
}

}  // namespace rkf
