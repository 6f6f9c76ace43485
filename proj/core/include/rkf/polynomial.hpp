#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rkf {

/// Exponent tuple of a monomial, one entry per variable.
using MultiIndex = std::vector<int>;

/// Number of monomials of total degree <= degree in `dims` variables,
/// i.e. (dims + degree)! / (dims! degree!).
std::size_t monomial_count(int dims, int degree);

/// Graded lexicographic enumeration: total degree ascending, and within a
/// degree the exponent of the first variable descending, e.g. for two
/// variables 1, x, y, x^2, xy, y^2, ...
///
/// The dictionary of degree r is a prefix of the dictionary of degree r + 1,
/// so coefficient positions are stable when a polynomial grows.
std::vector<MultiIndex> graded_monomials(int dims, int degree);

/// Position of `alpha` in the graded dictionary of its dimension.
std::size_t monomial_position(const MultiIndex& alpha);

/// Multivariate polynomial stored as a dense coefficient vector over the
/// graded monomial dictionary.
class Polynomial {
 public:
  Polynomial() = default;
  /// Zero polynomial in `dims` variables.
  explicit Polynomial(int dims);

  static Polynomial constant(int dims, double value);
  /// The single variable x_k (0-based k).
  static Polynomial variable(int dims, int k);
  static Polynomial monomial(const MultiIndex& alpha, double coefficient = 1.0);
  static Polynomial from_coefficients(int dims, std::vector<double> coefficients);

  int dims() const { return dims_; }
  /// Highest total degree carrying a nonzero coefficient; 0 for constants
  /// (including the zero polynomial).
  int degree() const;
  bool is_zero() const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Coefficient of `alpha`, zero if outside the stored range.
  double coefficient(const MultiIndex& alpha) const;

  /// Coefficients padded (or truncated) to the dictionary of `degree`.
  std::vector<double> coefficients_up_to(int degree) const;

  double operator()(std::span<const double> x) const;
  /// Univariate convenience.
  double operator()(double x) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double scale);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Substitute x_k -> scale_k * x_k + shift_k for every variable.
  Polynomial affine_substitute(std::span<const double> scale, std::span<const double> shift) const;

  /// Human-readable form, e.g. "1 + 0.5*d1^2". Variables are named
  /// `prefix` + (k + 1). Round-trips through parse_polynomial.
  std::string to_string(const std::string& prefix = "d") const;

 private:
  void trim();

  int dims_ = 1;
  std::vector<double> coeffs_;
};

/// Parse "c0 + c1*d1 - d1^2*d2" style text. Variables are `prefix`1..`prefix`dims.
/// Throws ConfigError on malformed input or out-of-range variables.
Polynomial parse_polynomial(const std::string& text, int dims, const std::string& prefix = "d");

}  // namespace rkf
