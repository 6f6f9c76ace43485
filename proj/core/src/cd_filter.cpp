#include "rkf/cd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"

namespace rkf {

namespace {

Eigen::Index idx(int i) { return static_cast<Eigen::Index>(i); }

// Σ̇_pc for the stacked covariance blocks: G⁻¹ ⊗ I applied to the blocks
// R_j = Σ_k S_jk Σ_k + (Σ_k S_jk Σ_k)ᵀ + T_j. Buffers are reused across
// calls so the RK4 loop does not allocate.
class SigmaRhs {
 public:
  explicit SigmaRhs(const GalerkinOperators& ops) : ops_(ops), x_(ops.S.rows(), ops.n), r_(ops.S.rows(), ops.n) {
    const int n = ops.n;
    mix_ = Eigen::MatrixXd::Zero(ops.S.rows(), ops.S.cols());
    for (int i = 0; i < ops.theta_count; ++i)
      for (int j = 0; j < ops.theta_count; ++j)
        mix_.block(idx(i * n), idx(j * n), n, n).diagonal().setConstant(ops.G_theta_inv(i, j));
  }

  void operator()(const Eigen::MatrixXd& sigma, Eigen::MatrixXd& out) {
    const int n = ops_.n;
    x_.noalias() = ops_.S * sigma;
    for (int j = 0; j < ops_.theta_count; ++j) {
      auto xj = x_.block(idx(j * n), 0, n, n);
      r_.block(idx(j * n), 0, n, n) = xj + xj.transpose() + ops_.T.block(idx(j * n), 0, n, n);
    }
    out.noalias() = mix_ * r_;
  }

 private:
  const GalerkinOperators& ops_;
  Eigen::MatrixXd mix_;
  Eigen::MatrixXd x_, r_;
};

void require_finite(const PceState& s, int step_index, int substep) {
  if (s.mu_pc.allFinite() && s.sigma_pc.allFinite()) return;
  std::string where = "integrate_pce: non-finite state at substep " + std::to_string(substep);
  if (step_index >= 0) where += " of step " + std::to_string(step_index);
  throw NumericalError(where);
}

}  // namespace

int default_cd_points(const UncertainLinearSystem& sys, int basis_order) {
  const int r = basis_order;
  return std::max({4 * r + sys.A.degree(), 2 * r + 2 * sys.B.degree(), 4 * r}) + 1;
}

int default_substeps(double dt) { return std::max(1, static_cast<int>(std::ceil(dt / 0.01 - 1e-9))); }

GalerkinOperators build_galerkin(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                 const QuadraticBasis& qbasis, const QuadratureRule& rule) {
  GalerkinOperators ops;
  const int n = sys.n();
  const int P = static_cast<int>(basis.size());
  const int T = static_cast<int>(qbasis.size());
  ops.n = n;
  ops.phi_count = P;
  ops.theta_count = T;
  ops.rule = rule;
  ops.basis = std::make_shared<const OrthoBasis>(basis);
  ops.qbasis = std::make_shared<const QuadraticBasis>(qbasis);

  const Eigen::MatrixXd phi = basis.evaluate_on(rule);
  const Eigen::MatrixXd theta = qbasis.evaluate_on(rule);
  const Eigen::VectorXd& w = rule.weights;

  ops.A_mu = Eigen::MatrixXd::Zero(idx(n * P), idx(n * P));
  ops.S = Eigen::MatrixXd::Zero(idx(n * T), idx(n * T));
  ops.T = Eigen::MatrixXd::Zero(idx(n * T), idx(n));
  for (Eigen::Index q = 0; q < w.size(); ++q) {
    const Eigen::VectorXd delta = rule.nodes.col(q);
    const Eigen::MatrixXd A = eval_A(sys, delta);
    const Eigen::MatrixXd B = eval_B(sys, delta);
    const Eigen::MatrixXd bqb = B * sys.Q * B.transpose();
    for (int i = 0; i < P; ++i)
      for (int j = 0; j < P; ++j) ops.A_mu.block(idx(i * n), idx(j * n), n, n) += (w[q] * phi(i, q) * phi(j, q)) * A;
    for (int j = 0; j < T; ++j) {
      for (int k = 0; k < T; ++k) ops.S.block(idx(j * n), idx(k * n), n, n) += (w[q] * theta(j, q) * theta(k, q)) * A;
      ops.T.block(idx(j * n), 0, n, n) += (w[q] * theta(j, q)) * bqb;
    }
  }
  ops.phi_norms = basis.norms();
  for (int i = 0; i < P; ++i) ops.A_mu.middleRows(idx(i * n), n) /= ops.phi_norms[i];
  for (int j = 0; j < T; ++j) ops.T.block(idx(j * n), 0, n, n) = symmetrized(ops.T.block(idx(j * n), 0, n, n));

  ops.G_theta = symmetrized(theta * w.asDiagonal() * theta.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(ops.G_theta);
  if (llt.info() != Eigen::Success || min_eigenvalue(ops.G_theta) <= 1e-14 * ops.G_theta.diagonal().maxCoeff())
    throw ConfigError("build_galerkin: quadratic basis Gram matrix is not positive definite");
  ops.G_theta_inv = symmetrized(llt.solve(Eigen::MatrixXd::Identity(T, T)));

  ops.phi_mean = phi * w;
  ops.theta_mean = theta * w;
  ops.phi_var = symmetrized(phi * w.asDiagonal() * phi.transpose() - ops.phi_mean * ops.phi_mean.transpose());
  return ops;
}

GalerkinOperators build_galerkin(const UncertainLinearSystem& sys, int basis_order, int points_per_dim) {
  const OrthoBasis basis = build_basis(sys.delta, basis_order);
  const QuadraticBasis qbasis = build_quadratic_basis(basis);
  const int points = points_per_dim > 0 ? points_per_dim : default_cd_points(sys, basis_order);
  return build_galerkin(sys, basis, qbasis, build_quadrature(sys.delta, points));
}

PceState lift(const GalerkinOperators& ops, const GaussianBelief& posterior) {
  PceState s;
  s.mu_pc = Eigen::VectorXd::Zero(idx(ops.n * ops.phi_count));
  s.sigma_pc = Eigen::MatrixXd::Zero(idx(ops.n * ops.theta_count), idx(ops.n));
  s.mu_pc.head(ops.n) = posterior.mean;
  s.sigma_pc.topRows(ops.n) = posterior.covariance;
  return s;
}

PceState integrate_pce(const GalerkinOperators& ops, const PceState& state, double dt, int substeps, int step_index) {
  if (!(dt > 0.0) || substeps < 1) throw ConfigError("integrate_pce: need dt > 0 and substeps >= 1");
  const double h = dt / substeps;
  SigmaRhs sigma_rhs(ops);

  PceState s = state;
  Eigen::VectorXd k1, k2, k3, k4;
  Eigen::MatrixXd m1(s.sigma_pc.rows(), s.sigma_pc.cols()), m2(m1.rows(), m1.cols()), m3(m1.rows(), m1.cols()),
      m4(m1.rows(), m1.cols()), tmp(m1.rows(), m1.cols());
  for (int step = 0; step < substeps; ++step) {
    k1.noalias() = ops.A_mu * s.mu_pc;
    k2.noalias() = ops.A_mu * (s.mu_pc + 0.5 * h * k1);
    k3.noalias() = ops.A_mu * (s.mu_pc + 0.5 * h * k2);
    k4.noalias() = ops.A_mu * (s.mu_pc + h * k3);
    s.mu_pc += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    sigma_rhs(s.sigma_pc, m1);
    tmp = s.sigma_pc + 0.5 * h * m1;
    sigma_rhs(tmp, m2);
    tmp = s.sigma_pc + 0.5 * h * m2;
    sigma_rhs(tmp, m3);
    tmp = s.sigma_pc + h * m3;
    sigma_rhs(tmp, m4);
    s.sigma_pc += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    require_finite(s, step_index, step);
  }
  return s;
}

GaussianBelief reconstruct_prior(const GalerkinOperators& ops, const PceState& state) {
  const int n = ops.n;
  const Eigen::Map<const Eigen::MatrixXd> mu(state.mu_pc.data(), n, ops.phi_count);
  GaussianBelief prior;
  prior.mean = mu * ops.phi_mean;
  Eigen::MatrixXd cov = mu * ops.phi_var * mu.transpose();
  for (int k = 0; k < ops.theta_count; ++k) cov += ops.theta_mean[k] * state.sigma_pc.middleRows(idx(k * n), n);
  prior.covariance = symmetrized(cov);
  check_belief(prior, "reconstruct_prior", kPriorPsdTolerance);
  return prior;
}

Eigen::VectorXd conditional_mean(const GalerkinOperators& ops, const PceState& state, const Eigen::VectorXd& standard) {
  const Eigen::Map<const Eigen::MatrixXd> mu(state.mu_pc.data(), ops.n, ops.phi_count);
  return mu * ops.basis->evaluate(standard);
}

Eigen::MatrixXd conditional_covariance(const GalerkinOperators& ops, const PceState& state,
                                       const Eigen::VectorXd& standard) {
  const Eigen::VectorXd th = ops.qbasis->evaluate(standard);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ops.n, ops.n);
  for (int k = 0; k < ops.theta_count; ++k) out += th[k] * state.sigma_pc.middleRows(idx(k * ops.n), ops.n);
  return symmetrized(out);
}

GaussianBelief cd_step(const GalerkinOperators& ops, const GaussianBelief& posterior, const Eigen::VectorXd& y,
                       double dt, int substeps, const Eigen::MatrixXd& C, const Eigen::MatrixXd& R) {
  const PceState propagated = integrate_pce(ops, lift(ops, posterior), dt, substeps);
  return kalman_update(reconstruct_prior(ops, propagated), y, C, R);
}

GaussianBelief nominal_ct_propagate(const NominalModel& model, const GaussianBelief& posterior, double dt,
                                    int substeps) {
  if (!(dt > 0.0) || substeps < 1) throw ConfigError("nominal_ct_propagate: need dt > 0 and substeps >= 1");
  const double h = dt / substeps;
  const Eigen::MatrixXd& A = model.A;
  auto lyap = [&](const Eigen::MatrixXd& P) -> Eigen::MatrixXd {
    const Eigen::MatrixXd AP = A * P;
    return AP + AP.transpose() + model.BQBt;
  };
  Eigen::VectorXd mu = posterior.mean;
  Eigen::MatrixXd P = posterior.covariance;
  for (int step = 0; step < substeps; ++step) {
    const Eigen::VectorXd k1 = A * mu;
    const Eigen::VectorXd k2 = A * (mu + 0.5 * h * k1);
    const Eigen::VectorXd k3 = A * (mu + 0.5 * h * k2);
    const Eigen::VectorXd k4 = A * (mu + h * k3);
    mu += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Eigen::MatrixXd m1 = lyap(P);
    const Eigen::MatrixXd m2 = lyap(P + 0.5 * h * m1);
    const Eigen::MatrixXd m3 = lyap(P + 0.5 * h * m2);
    const Eigen::MatrixXd m4 = lyap(P + h * m3);
    P += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
  }
  GaussianBelief prior{mu, symmetrized(P)};
  if (!prior.finite()) throw NumericalError("nominal_ct_propagate: non-finite prior");
  return prior;
}

GaussianBelief CdRobustFilter::predict(const GaussianBelief& posterior) const {
  const PceState propagated = integrate_pce(*ops_, lift(*ops_, posterior), dt_, substeps_, steps());
  return reconstruct_prior(*ops_, propagated);
}

}  // namespace rkf
