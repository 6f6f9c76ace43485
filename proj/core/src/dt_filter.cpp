#include "rkf/dt_filter.hpp"

#include <algorithm>

#include "rkf/linalg.hpp"

namespace rkf {

int default_dt_points(const UncertainLinearSystem& sys) {
  return std::max(2 * sys.A.degree(), 2 * sys.B.degree()) + 1;
}

DtMomentTables build_dt_tables(const UncertainLinearSystem& sys, const QuadratureRule& rule) {
  DtMomentTables t;
  t.weights = rule.weights;
  t.A_nodes.reserve(rule.size());
  t.A_mean = Eigen::MatrixXd::Zero(sys.n(), sys.n());
  t.BQBt_mean = Eigen::MatrixXd::Zero(sys.n(), sys.n());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd delta = rule.nodes.col(static_cast<Eigen::Index>(q));
    t.A_nodes.push_back(eval_A(sys, delta));
    const Eigen::MatrixXd B = eval_B(sys, delta);
    t.A_mean += rule.weights[static_cast<Eigen::Index>(q)] * t.A_nodes.back();
    t.BQBt_mean += rule.weights[static_cast<Eigen::Index>(q)] * (B * sys.Q * B.transpose());
  }
  t.BQBt_mean = symmetrized(t.BQBt_mean);
  t.deviations.reserve(rule.size());
  for (const auto& A : t.A_nodes) t.deviations.push_back(A - t.A_mean);
  return t;
}

DtMomentTables build_dt_tables(const UncertainLinearSystem& sys, int points_per_dim) {
  const int points = points_per_dim > 0 ? points_per_dim : default_dt_points(sys);
  return build_dt_tables(sys, build_quadrature(sys.delta, points));
}

GaussianBelief dt_propagate(const DtMomentTables& tables, const GaussianBelief& posterior) {
  const Eigen::MatrixXd mm = posterior.mean * posterior.mean.transpose();
  Eigen::MatrixXd cov = tables.BQBt_mean;
  for (std::size_t q = 0; q < tables.A_nodes.size(); ++q) {
    const double w = tables.weights[static_cast<Eigen::Index>(q)];
    const auto& A = tables.A_nodes[q];
    const auto& D = tables.deviations[q];
    cov.noalias() += w * (A * posterior.covariance * A.transpose());
    cov.noalias() += w * (D * mm * D.transpose());
  }
  return {tables.A_mean * posterior.mean, symmetrized(cov)};
}

NominalModel nominal_model(const UncertainLinearSystem& sys) {
  const Eigen::VectorXd center = sys.delta.mean();
  const Eigen::MatrixXd B = eval_B(sys, center);
  return {eval_A(sys, center), symmetrized(B * sys.Q * B.transpose())};
}

GaussianBelief nominal_propagate(const NominalModel& model, const GaussianBelief& posterior) {
  return {model.A * posterior.mean,
          symmetrized(model.A * posterior.covariance * model.A.transpose() + model.BQBt)};
}

GaussianBelief nominal_kf_step(const NominalModel& model, const GaussianBelief& posterior, const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& C, const Eigen::MatrixXd& R) {
  return kalman_update(nominal_propagate(model, posterior), y, C, R);
}

}  // namespace rkf
