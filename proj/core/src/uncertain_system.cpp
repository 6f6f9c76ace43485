#include "rkf/uncertain_system.hpp"

#include <cmath>

#include "rkf/errors.hpp"
#include "rkf/linalg.hpp"

namespace rkf {

namespace {

std::string shape(const Eigen::MatrixXd& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

bool symmetric(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

void validate(const UncertainLinearSystem& sys) {
  const int n = sys.A.rows();
  if (n < 1 || sys.A.cols() != n) throw ConfigError("A must be square and non-empty");
  if (sys.B.rows() != n || sys.B.cols() < 1) throw ConfigError("B must have n = " + std::to_string(n) + " rows");
  if (sys.C.cols() != n || sys.C.rows() < 1) throw ConfigError("C must be p x n with n = " + std::to_string(n) + " (got " + shape(sys.C) + ")");
  if (sys.Q.rows() != sys.m() || sys.Q.cols() != sys.m())
    throw ConfigError("Q must be m x m with m = " + std::to_string(sys.m()) + " (got " + shape(sys.Q) + ")");
  if (sys.R.rows() != sys.p() || sys.R.cols() != sys.p())
    throw ConfigError("R must be p x p with p = " + std::to_string(sys.p()) + " (got " + shape(sys.R) + ")");
  if (sys.A.dims() != sys.delta.dims() || sys.B.dims() != sys.delta.dims())
    throw ConfigError("A and B must be polynomials in " + std::to_string(sys.delta.dims()) + " parameter(s)");
  if (!sys.C.allFinite() || !sys.Q.allFinite() || !sys.R.allFinite()) throw ConfigError("C, Q and R must be finite");

  if (!symmetric(sys.Q)) throw ConfigError("Q must be symmetric");
  if (!is_psd(sys.Q, 1e-12)) throw ConfigError("Q must be positive semidefinite");
  if (!symmetric(sys.R)) throw ConfigError("R must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(sys.R);
  if (llt.info() != Eigen::Success || min_eigenvalue(sys.R) <= 0.0) throw ConfigError("R must be positive definite");

  if (sys.time_mode == TimeMode::Continuous && !(sys.sample_period > 0.0 && std::isfinite(sys.sample_period)))
    throw ConfigError("continuous-time systems need a sample period dt > 0");
}

Eigen::MatrixXd eval_A(const UncertainLinearSystem& sys, const Eigen::VectorXd& delta) { return sys.A.evaluate(delta); }

Eigen::MatrixXd eval_B(const UncertainLinearSystem& sys, const Eigen::VectorXd& delta) { return sys.B.evaluate(delta); }

Eigen::MatrixXd mean_A(const UncertainLinearSystem& sys, const QuadratureRule& rule) { return sys.A.mean(rule); }

}  // namespace rkf
