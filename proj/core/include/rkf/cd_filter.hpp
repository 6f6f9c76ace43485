#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "rkf/dt_filter.hpp"
#include "rkf/filter.hpp"
#include "rkf/gaussian_belief.hpp"
#include "rkf/ortho_basis.hpp"
#include "rkf/quadrature.hpp"
#include "rkf/uncertain_system.hpp"

namespace rkf {

/// Polynomial chaos coefficients of the conditional moments:
///   μ(t, Δ) = Σ_i φ_i(Δ) μ_i,   Σ(t, Δ) = Σ_k θ_k(Δ) Σ_k.
struct PceState {
  Eigen::VectorXd mu_pc;     // n(N+1), blocks μ_0 .. μ_N
  Eigen::MatrixXd sigma_pc;  // n(M+1) x n, blocks Σ_0 .. Σ_M
};

/// Expectation tensors of the projected moment ODEs.
struct GalerkinOperators {
  int n = 0;
  int phi_count = 0;    // N + 1
  int theta_count = 0;  // M + 1

  /// Block (i, j) = E[φ_i φ_j A] / h_i.
  Eigen::MatrixXd A_mu;
  /// Block (j, k) = E[θ_j θ_k A].
  Eigen::MatrixXd S;
  /// Block j = E[θ_j B Q Bᵀ], stacked n(M+1) x n.
  Eigen::MatrixXd T;
  Eigen::MatrixXd G_theta;
  Eigen::MatrixXd G_theta_inv;
  Eigen::VectorXd phi_norms;
  Eigen::VectorXd phi_mean;
  Eigen::VectorXd theta_mean;
  Eigen::MatrixXd phi_var;

  QuadratureRule rule;
  std::shared_ptr<const OrthoBasis> basis;
  std::shared_ptr<const QuadraticBasis> qbasis;
};

/// Gauss points per dimension that integrate every Galerkin tensor
/// exactly: max integrand degree (4r + deg A, 2r + 2 deg B, 4r) plus one.
int default_cd_points(const UncertainLinearSystem& sys, int basis_order);
/// RK4 steps per interval: ceil(dt / 0.01).
int default_substeps(double dt);

/// Throws ConfigError if E[ΘΘᵀ] is not positive definite.
GalerkinOperators build_galerkin(const UncertainLinearSystem& sys, const OrthoBasis& basis,
                                 const QuadraticBasis& qbasis, const QuadratureRule& rule);
/// Builds basis, quadratic basis and rule from settings (0 picks defaults).
GalerkinOperators build_galerkin(const UncertainLinearSystem& sys, int basis_order, int points_per_dim = 0);

/// Posterior into the zeroth blocks; higher blocks zero.
PceState lift(const GalerkinOperators& ops, const GaussianBelief& posterior);

/// Classical RK4 over [0, dt] with `substeps` equal steps. Throws
/// NumericalError on non-finite values, naming `step_index` when >= 0.
PceState integrate_pce(const GalerkinOperators& ops, const PceState& state, double dt, int substeps,
                       int step_index = -1);

/// Tolerance of the PSD check on the reconstructed prior.
inline constexpr double kPriorPsdTolerance = 1e-8;

/// Total moments: μ⁻ = Σ Φ̄_i μ_i, Σ⁻ = Σ Θ̄_k Σ_k + μ̃ Var(Φ) μ̃ᵀ. Throws
/// NumericalError if Σ⁻ is indefinite beyond tolerance.
GaussianBelief reconstruct_prior(const GalerkinOperators& ops, const PceState& state);

/// Conditional moments at a point ξ of the standard coordinate.
Eigen::VectorXd conditional_mean(const GalerkinOperators& ops, const PceState& state, const Eigen::VectorXd& standard);
Eigen::MatrixXd conditional_covariance(const GalerkinOperators& ops, const PceState& state,
                                       const Eigen::VectorXd& standard);

/// lift, integrate, reconstruct, update.
GaussianBelief cd_step(const GalerkinOperators& ops, const GaussianBelief& posterior, const Eigen::VectorXd& y,
                       double dt, int substeps, const Eigen::MatrixXd& C, const Eigen::MatrixXd& R);

/// RK4 on μ̇ = A μ and Σ̇ = A Σ + Σ Aᵀ + B Q Bᵀ for a frozen plant.
GaussianBelief nominal_ct_propagate(const NominalModel& model, const GaussianBelief& posterior, double dt,
                                    int substeps);

class CdRobustFilter final : public Filter {
 public:
  CdRobustFilter(std::shared_ptr<const GalerkinOperators> ops, Eigen::MatrixXd C, Eigen::MatrixXd R, double dt,
                 int substeps)
      : Filter(std::move(C), std::move(R)), ops_(std::move(ops)), dt_(dt), substeps_(substeps) {}
  FilterKind kind() const override { return FilterKind::Robust; }

 protected:
  GaussianBelief predict(const GaussianBelief& posterior) const override;

 private:
  std::shared_ptr<const GalerkinOperators> ops_;
  double dt_;
  int substeps_;
};

class CdNominalFilter final : public Filter {
 public:
  CdNominalFilter(NominalModel model, Eigen::MatrixXd C, Eigen::MatrixXd R, double dt, int substeps)
      : Filter(std::move(C), std::move(R)), model_(std::move(model)), dt_(dt), substeps_(substeps) {}
  FilterKind kind() const override { return FilterKind::Nominal; }

 protected:
  GaussianBelief predict(const GaussianBelief& posterior) const override {
    return nominal_ct_propagate(model_, posterior, dt_, substeps_);
  }

 private:
  NominalModel model_;
  double dt_;
  int substeps_;
};

}  // namespace rkf
