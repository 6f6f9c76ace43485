#include "rkf/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "rkf/errors.hpp"

namespace rkf {

namespace {

// Golub–Welsch eigenvalues of the symmetric Jacobi matrix with zero
// diagonal give starting nodes; Newton on the recurrence polishes them.
std::vector<double> jacobi_nodes(int n, double (*offdiag)(int)) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k - 1, k) = J(k, k - 1) = offdiag(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
  std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(x.begin(), x.end());
  return x;
}

double legendre_offdiag(int k) { return k / std::sqrt(4.0 * k * k - 1.0); }
double hermite_offdiag(int k) { return std::sqrt(static_cast<double>(k)); }

// P_n(x) and P_{n-1}(x).
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// He_n / sqrt(n!) and He_{n-1} / sqrt((n-1)!).
std::pair<double, double> hermite_pair(int n, double x) {
  double h0 = 1.0, h1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double h2 = (x * h1 - std::sqrt(static_cast<double>(k)) * h0) / std::sqrt(k + 1.0);
    h0 = h1;
    h1 = h2;
  }
  return {h1, h0};
}

void symmetrize(GaussRule1D& r) {
  const auto n = r.nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
    const double w = 0.5 * (r.weights[i] + r.weights[j]);
    r.nodes[i] = -x;
    r.nodes[j] = x;
    r.weights[i] = r.weights[j] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
}

}  // namespace

GaussRule1D gauss_legendre(int points) {
  if (points < 1) throw ConfigError("quadrature needs at least one point per dimension");
  GaussRule1D r;
  r.nodes = jacobi_nodes(points, legendre_offdiag);
  r.weights.resize(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    double x = r.nodes[i];
    double dp = 0.0;
    for (int it = 0; it < 3; ++it) {
      auto [pn, pm] = legendre_pair(points, x);
      dp = points * (x * pn - pm) / (x * x - 1.0);
      x -= pn / dp;
    }
    auto [pn, pm] = legendre_pair(points, x);
    dp = points * (x * pn - pm) / (x * x - 1.0);
    r.nodes[i] = x;
    r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  symmetrize(r);
  return r;
}

GaussRule1D gauss_hermite(int points) {
  if (points < 1) throw ConfigError("quadrature needs at least one point per dimension");
  GaussRule1D r;
  r.nodes = jacobi_nodes(points, hermite_offdiag);
  r.weights.resize(r.nodes.size());
  const double sn = std::sqrt(static_cast<double>(points));
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    double x = r.nodes[i];
    for (int it = 0; it < 3; ++it) {
      auto [hn, hm] = hermite_pair(points, x);
      x -= hn / (sn * hm);
    }
    auto [hn, hm] = hermite_pair(points, x);
    r.nodes[i] = x;
    r.weights[i] = 1.0 / (points * hm * hm);
  }
  symmetrize(r);
  return r;
}

QuadratureRule build_quadrature(const ParameterDistribution& dist, int points_per_dim) {
  if (points_per_dim < 1) throw ConfigError("quadrature needs at least one point per dimension");
  const int d = dist.dims();
  std::vector<GaussRule1D> rules;
  rules.reserve(static_cast<std::size_t>(d));
  for (const auto& m : dist.marginals())
    rules.push_back(std::holds_alternative<Uniform>(m) ? gauss_legendre(points_per_dim) : gauss_hermite(points_per_dim));

  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(points_per_dim);

  QuadratureRule rule;
  rule.standard_nodes.resize(d, static_cast<Eigen::Index>(total));
  rule.weights.resize(static_cast<Eigen::Index>(total));
  rule.exactness_degree = 2 * points_per_dim - 1;

  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t q = 0; q < total; ++q) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const auto& r1 = rules[static_cast<std::size_t>(k)];
      const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
      rule.standard_nodes(k, static_cast<Eigen::Index>(q)) = r1.nodes[i];
      w *= r1.weights[i];
    }
    rule.weights[static_cast<Eigen::Index>(q)] = w;
    // last dimension varies fastest
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < points_per_dim) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }

  const Eigen::VectorXd c = dist.center();
  const Eigen::VectorXd s = dist.scale();
  rule.nodes = (s.asDiagonal() * rule.standard_nodes).colwise() + c;
  return rule;
}

}  // namespace rkf
