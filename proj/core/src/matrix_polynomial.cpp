#include "rkf/uncertain_system.hpp"

#include "rkf/errors.hpp"

namespace rkf {

MatrixPolynomial::MatrixPolynomial(int rows, int cols, int dims)
    : rows_(rows), cols_(cols), dims_(dims), entries_(static_cast<std::size_t>(rows * cols), Polynomial(dims)) {
  if (rows < 0 || cols < 0) throw ConfigError("negative matrix dimension");
}

MatrixPolynomial MatrixPolynomial::constant(const Eigen::MatrixXd& value, int dims) {
  MatrixPolynomial out(static_cast<int>(value.rows()), static_cast<int>(value.cols()), dims);
  for (int r = 0; r < out.rows_; ++r)
    for (int c = 0; c < out.cols_; ++c) out(r, c) = Polynomial::constant(dims, value(r, c));
  return out;
}

std::size_t MatrixPolynomial::index(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw ConfigError("matrix polynomial index out of range");
  return static_cast<std::size_t>(r * cols_ + c);
}

int MatrixPolynomial::degree() const {
  int deg = 0;
  for (const auto& e : entries_) deg = std::max(deg, e.degree());
  return deg;
}

Eigen::MatrixXd MatrixPolynomial::evaluate(const Eigen::VectorXd& delta) const {
  if (delta.size() != dims_) throw ConfigError("parameter point has wrong dimension");
  Eigen::MatrixXd out(rows_, cols_);
  const std::span<const double> x(delta.data(), static_cast<std::size_t>(delta.size()));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(r, c) = entries_[static_cast<std::size_t>(r * cols_ + c)](x);
  return out;
}

Eigen::MatrixXd MatrixPolynomial::mean(const QuadratureRule& rule) const {
  return expect(rule, [this](const Eigen::VectorXd& d) { return evaluate(d); });
}

}  // namespace rkf
