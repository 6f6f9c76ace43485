#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include <spdlog/spdlog.h>

#include "rkf/errors.hpp"
#include "rkf/ortho_basis.hpp"

namespace rkf {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kResidualLimit = 1e-9;

}  // namespace

std::vector<std::pair<int, int>> product_pairs(std::size_t count) {
  std::vector<std::pair<int, int>> out;
  out.reserve(count * (count + 1) / 2);
  for (int i = 0; i < static_cast<int>(count); ++i)
    for (int j = i; j < static_cast<int>(count); ++j) out.emplace_back(i, j);
  return out;
}

QuadraticBasis::QuadraticBasis(OrthoBasis parent, std::vector<std::pair<int, int>> pairs,
                               Eigen::MatrixXd product_coefficients, double residual)
    : parent_(std::move(parent)), pairs_(std::move(pairs)), coeffs_(std::move(product_coefficients)), residual_(residual) {
  const auto& phi = parent_.polynomials();
  functions_.reserve(pairs_.size());
  for (auto [i, j] : pairs_) functions_.push_back(phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)]);
}

Eigen::VectorXd QuadraticBasis::evaluate(const Eigen::VectorXd& standard) const {
  const Eigen::VectorXd phi = parent_.evaluate(standard);
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs_.size()));
  for (std::size_t k = 0; k < pairs_.size(); ++k) out[static_cast<Eigen::Index>(k)] = phi[pairs_[k].first] * phi[pairs_[k].second];
  return out;
}

Eigen::MatrixXd QuadraticBasis::evaluate_on(const QuadratureRule& rule) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(rule.size()));
  for (Eigen::Index q = 0; q < out.cols(); ++q) out.col(q) = evaluate(rule.standard_nodes.col(q));
  return out;
}

QuadraticBasis build_quadratic_basis(const OrthoBasis& basis) {
  const auto candidates = product_pairs(basis.size());
  const auto count = static_cast<Eigen::Index>(candidates.size());

  // Products have degree <= 2r, their Gram entries degree <= 4r.
  const QuadratureRule rule = build_quadrature(basis.distribution(), 2 * basis.order() + 1);
  const Eigen::MatrixXd phi = basis.evaluate_on(rule);
  Eigen::MatrixXd values(count, phi.cols());
  for (Eigen::Index c = 0; c < count; ++c) {
    const auto [i, j] = candidates[static_cast<std::size_t>(c)];
    values.row(c) = phi.row(i).cwiseProduct(phi.row(j));
  }
  Eigen::MatrixXd gram = values * rule.weights.asDiagonal() * values.transpose();
  const Eigen::VectorXd scale = gram.diagonal().cwiseSqrt().cwiseInverse();
  gram = scale.asDiagonal() * gram * scale.asDiagonal();

  // Pivoted Cholesky on the normalized Gram matrix; the remaining diagonal
  // of candidate c is its squared relative distance to the selected span.
  Eigen::VectorXd remaining = gram.diagonal();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(count, count);
  std::vector<Eigen::Index> selected;
  std::vector<bool> used(static_cast<std::size_t>(count), false);
  for (Eigen::Index step = 0; step < count; ++step) {
    Eigen::Index pivot = -1;
    if (step == 0) {
      pivot = 0;  // φ_0 φ_0 = 1
    } else {
      double best = kRankTolerance;
      for (Eigen::Index c = 0; c < count; ++c)
        if (!used[static_cast<std::size_t>(c)] && remaining[c] > best) {
          best = remaining[c];
          pivot = c;
        }
    }
    if (pivot < 0) break;
    const double root = std::sqrt(remaining[pivot]);
    for (Eigen::Index c = 0; c < count; ++c) {
      if (used[static_cast<std::size_t>(c)] || c == pivot) continue;
      const double v = (gram(c, pivot) - L.row(c).head(step).dot(L.row(pivot).head(step))) / root;
      L(c, step) = v;
      remaining[c] -= v * v;
    }
    L(pivot, step) = root;
    used[static_cast<std::size_t>(pivot)] = true;
    selected.push_back(pivot);
  }
  std::sort(selected.begin(), selected.end());

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(selected.size());
  for (auto c : selected) pairs.push_back(candidates[static_cast<std::size_t>(c)]);

  // Express every product in the selected set, exactly, in coefficient space.
  const int d = basis.distribution().dims();
  const int top = 2 * basis.order();
  const auto dict = static_cast<Eigen::Index>(monomial_count(d, top));
  const auto& polys = basis.polynomials();
  auto coeff_column = [&](std::pair<int, int> p) {
    const auto v = (polys[static_cast<std::size_t>(p.first)] * polys[static_cast<std::size_t>(p.second)]).coefficients_up_to(top);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), dict).eval();
  };
  Eigen::MatrixXd theta(dict, static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) theta.col(static_cast<Eigen::Index>(k)) = coeff_column(pairs[k]);

  Eigen::MatrixXd products(dict, count);
  for (Eigen::Index c = 0; c < count; ++c) products.col(c) = coeff_column(candidates[static_cast<std::size_t>(c)]);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(theta);
  const Eigen::MatrixXd solution = qr.solve(products);
  double residual = 0.0;
  for (Eigen::Index c = 0; c < count; ++c) {
    const double size = std::max(1.0, products.col(c).cwiseAbs().maxCoeff());
    residual = std::max(residual, (theta * solution.col(c) - products.col(c)).cwiseAbs().maxCoeff() / size);
  }
  if (!(residual < kResidualLimit))
    throw NumericalError("quadratic basis does not span all products (residual " + std::to_string(residual) + ")");

  const auto N = static_cast<long>(basis.size()) - 1;
  const auto M = static_cast<long>(pairs.size()) - 1;
  if (N >= 1 && M != 2 * (N - 1)) {
    static std::mutex warned_mutex;
    static std::set<std::pair<long, int>> warned;  // once per (N, dims)
    std::lock_guard lock(warned_mutex);
    if (warned.insert({N, basis.distribution().dims()}).second)
      spdlog::warn("quadratic basis: rank selection gives M = {} for N = {}, which differs from 2(N-1) = {}", M, N,
                   2 * (N - 1));
  }

  return QuadraticBasis(basis, std::move(pairs), solution.transpose(), residual);
}

}  // namespace rkf
