#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "rkf/filter.hpp"
#include "rkf/gaussian_belief.hpp"
#include "rkf/quadrature.hpp"
#include "rkf/uncertain_system.hpp"

namespace rkf {

/// Quadrature tables for the discrete-time moment recursion.
struct DtMomentTables {
  Eigen::VectorXd weights;
  std::vector<Eigen::MatrixXd> A_nodes;     // A(δ_q)
  std::vector<Eigen::MatrixXd> deviations;  // A(δ_q) - Ā
  Eigen::MatrixXd A_mean;                   // Ā
  Eigen::MatrixXd BQBt_mean;                // E[B Q Bᵀ]
};

/// Smallest Gauss point count integrating A Σ Aᵀ and B Q Bᵀ exactly,
/// following the "max integrand degree + 1" rule.
int default_dt_points(const UncertainLinearSystem& sys);

DtMomentTables build_dt_tables(const UncertainLinearSystem& sys, const QuadratureRule& rule);
DtMomentTables build_dt_tables(const UncertainLinearSystem& sys, int points_per_dim = 0);

/// Total prior of x_k from the posterior of x_{k-1}:
///   μ⁻ = Ā μ⁺
///   Σ⁻ = E[A Σ⁺ Aᵀ] + E[B Q Bᵀ] + E[(A - Ā) μ⁺μ⁺ᵀ (A - Ā)ᵀ]
GaussianBelief dt_propagate(const DtMomentTables& tables, const GaussianBelief& posterior);

/// Plant frozen at one parameter value, with BQBᵀ precomputed.
struct NominalModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd BQBt;
};
/// The plant at δ = E[Δ].
NominalModel nominal_model(const UncertainLinearSystem& sys);

GaussianBelief nominal_propagate(const NominalModel& model, const GaussianBelief& posterior);
GaussianBelief nominal_kf_step(const NominalModel& model, const GaussianBelief& posterior, const Eigen::VectorXd& y,
                               const Eigen::MatrixXd& C, const Eigen::MatrixXd& R);

class DtRobustFilter final : public Filter {
 public:
  DtRobustFilter(std::shared_ptr<const DtMomentTables> tables, Eigen::MatrixXd C, Eigen::MatrixXd R)
      : Filter(std::move(C), std::move(R)), tables_(std::move(tables)) {}
  FilterKind kind() const override { return FilterKind::Robust; }

 protected:
  GaussianBelief predict(const GaussianBelief& posterior) const override { return dt_propagate(*tables_, posterior); }

 private:
  std::shared_ptr<const DtMomentTables> tables_;
};

class DtNominalFilter final : public Filter {
 public:
  DtNominalFilter(NominalModel model, Eigen::MatrixXd C, Eigen::MatrixXd R)
      : Filter(std::move(C), std::move(R)), model_(std::move(model)) {}
  FilterKind kind() const override { return FilterKind::Nominal; }

 protected:
  GaussianBelief predict(const GaussianBelief& posterior) const override { return nominal_propagate(model_, posterior); }

 private:
  NominalModel model_;
};

}  // namespace rkf
