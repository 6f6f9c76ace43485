#pragma once

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "rkf/experiment.hpp"
#include "rkf/gaussian_belief.hpp"

namespace rkf {

/// Predict/update recursion shared by every filter. Subclasses supply the
/// time update; the measurement update is the standard Kalman update.
class Filter {
 public:
  Filter(Eigen::MatrixXd C, Eigen::MatrixXd R) : C_(std::move(C)), R_(std::move(R)) {}
  virtual ~Filter() = default;

  virtual FilterKind kind() const = 0;
  std::string name() const { return to_string(kind()); }

  void reset(GaussianBelief initial) {
    posterior_ = std::move(initial);
    prior_ = posterior_;
    steps_ = 0;
  }

  /// Advance one sampling interval and absorb measurement y.
  const GaussianBelief& step(const Eigen::VectorXd& y) {
    prior_ = predict(posterior_);
    posterior_ = kalman_update(prior_, y, C_, R_);
    ++steps_;
    return posterior_;
  }

  const GaussianBelief& posterior() const { return posterior_; }
  const GaussianBelief& prior() const { return prior_; }
  int steps() const { return steps_; }

 protected:
  virtual GaussianBelief predict(const GaussianBelief& posterior) const = 0;

 private:
  Eigen::MatrixXd C_;
  Eigen::MatrixXd R_;
  GaussianBelief posterior_;
  GaussianBelief prior_;
  int steps_ = 0;
};

}  // namespace rkf
