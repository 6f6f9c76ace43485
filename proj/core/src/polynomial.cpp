#include "rkf/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "rkf/errors.hpp"

namespace rkf {

namespace {

// Number of exponent tuples of exactly total degree `degree` in `dims` variables.
std::size_t exact_count(int dims, int degree) {
  if (dims == 0) return degree == 0 ? 1 : 0;
  // C(degree + dims - 1, dims - 1)
  std::size_t r = 1;
  for (int i = 1; i < dims; ++i) r = r * static_cast<std::size_t>(degree + i) / static_cast<std::size_t>(i);
  return r;
}

int total_degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

// Advance to the next monomial in graded lexicographic order.
void next_monomial(MultiIndex& alpha) {
  const auto d = alpha.size();
  if (d == 1) {
    ++alpha[0];
    return;
  }
  const int tail = alpha[d - 1];
  alpha[d - 1] = 0;
  for (std::size_t i = d - 1; i-- > 0;) {
    if (alpha[i] > 0) {
      --alpha[i];
      alpha[i + 1] = tail + 1;
      return;
    }
  }
  alpha[0] = tail + 1;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::size_t monomial_count(int dims, int degree) {
  if (degree < 0) return 0;
  return exact_count(dims + 1, degree);
}

std::vector<MultiIndex> graded_monomials(int dims, int degree) {
  std::vector<MultiIndex> out;
  const auto count = monomial_count(dims, degree);
  out.reserve(count);
  MultiIndex alpha(static_cast<std::size_t>(dims), 0);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(alpha);
    next_monomial(alpha);
  }
  return out;
}

std::size_t monomial_position(const MultiIndex& alpha) {
  const int dims = static_cast<int>(alpha.size());
  int remaining = total_degree(alpha);
  std::size_t pos = monomial_count(dims, remaining - 1);
  for (int i = 0; i + 1 < dims; ++i) {
    const int rest_dims = dims - i - 1;
    for (int a = alpha[static_cast<std::size_t>(i)] + 1; a <= remaining; ++a) pos += exact_count(rest_dims, remaining - a);
    remaining -= alpha[static_cast<std::size_t>(i)];
  }
  return pos;
}

Polynomial::Polynomial(int dims) : dims_(dims) {
  if (dims < 1) throw ConfigError("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(int dims, double value) {
  Polynomial p(dims);
  p.coeffs_ = {value};
  p.trim();
  return p;
}

Polynomial Polynomial::variable(int dims, int k) {
  MultiIndex alpha(static_cast<std::size_t>(dims), 0);
  alpha.at(static_cast<std::size_t>(k)) = 1;
  return monomial(alpha);
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double coefficient) {
  Polynomial p(static_cast<int>(alpha.size()));
  const auto pos = monomial_position(alpha);
  p.coeffs_.assign(pos + 1, 0.0);
  p.coeffs_[pos] = coefficient;
  p.trim();
  return p;
}

Polynomial Polynomial::from_coefficients(int dims, std::vector<double> coefficients) {
  Polynomial p(dims);
  p.coeffs_ = std::move(coefficients);
  p.trim();
  return p;
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) return;
  // Pad to the end of the highest occupied degree so the length always
  // matches a full dictionary.
  std::size_t last = coeffs_.size() - 1;
  int deg = 0;
  while (monomial_count(dims_, deg) <= last) ++deg;
  coeffs_.resize(monomial_count(dims_, deg), 0.0);
}

int Polynomial::degree() const {
  int deg = 0;
  if (coeffs_.empty()) return 0;
  while (monomial_count(dims_, deg) < coeffs_.size()) ++deg;
  return deg;
}

bool Polynomial::is_zero() const { return coeffs_.empty(); }

double Polynomial::coefficient(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != dims_) throw ConfigError("monomial dimension mismatch");
  const auto pos = monomial_position(alpha);
  return pos < coeffs_.size() ? coeffs_[pos] : 0.0;
}

std::vector<double> Polynomial::coefficients_up_to(int degree) const {
  std::vector<double> out(coeffs_);
  out.resize(monomial_count(dims_, degree), 0.0);
  return out;
}

double Polynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dims_) throw ConfigError("polynomial evaluated at point of wrong dimension");
  if (coeffs_.empty()) return 0.0;
  const int deg = degree();
  const auto d = static_cast<std::size_t>(dims_);
  const auto stride = static_cast<std::size_t>(deg + 1);
  std::vector<double> powers(d * stride);
  for (std::size_t k = 0; k < d; ++k) {
    powers[k * stride] = 1.0;
    for (std::size_t e = 1; e < stride; ++e) powers[k * stride + e] = powers[k * stride + e - 1] * x[k];
  }
  MultiIndex alpha(d, 0);
  double acc = 0.0;
  for (double c : coeffs_) {
    if (c != 0.0) {
      double term = c;
      for (std::size_t k = 0; k < d; ++k) term *= powers[k * stride + static_cast<std::size_t>(alpha[k])];
      acc += term;
    }
    next_monomial(alpha);
  }
  return acc;
}

double Polynomial::operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dims_ != dims_) throw ConfigError("polynomial dimension mismatch");
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += other * -1.0; }

Polynomial& Polynomial::operator*=(double scale) {
  for (double& c : coeffs_) c *= scale;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dims_ != b.dims_) throw ConfigError("polynomial dimension mismatch");
  Polynomial out(a.dims_);
  if (a.is_zero() || b.is_zero()) return out;
  out.coeffs_.assign(monomial_count(a.dims_, a.degree() + b.degree()), 0.0);
  const auto d = static_cast<std::size_t>(a.dims_);
  MultiIndex alpha(d, 0);
  MultiIndex sum(d, 0);
  for (double ca : a.coeffs_) {
    if (ca != 0.0) {
      MultiIndex beta(d, 0);
      for (double cb : b.coeffs_) {
        if (cb != 0.0) {
          for (std::size_t k = 0; k < d; ++k) sum[k] = alpha[k] + beta[k];
          out.coeffs_[monomial_position(sum)] += ca * cb;
        }
        next_monomial(beta);
      }
    }
    next_monomial(alpha);
  }
  out.trim();
  return out;
}

Polynomial Polynomial::affine_substitute(std::span<const double> scale, std::span<const double> shift) const {
  const auto d = static_cast<std::size_t>(dims_);
  if (scale.size() != d || shift.size() != d) throw ConfigError("affine substitution dimension mismatch");
  std::vector<Polynomial> mapped;
  mapped.reserve(d);
  for (std::size_t k = 0; k < d; ++k)
    mapped.push_back(Polynomial::variable(dims_, static_cast<int>(k)) * scale[k] + Polynomial::constant(dims_, shift[k]));

  Polynomial out(dims_);
  MultiIndex alpha(d, 0);
  for (double c : coeffs_) {
    if (c != 0.0) {
      Polynomial term = Polynomial::constant(dims_, c);
      for (std::size_t k = 0; k < d; ++k)
        for (int e = 0; e < alpha[k]; ++e) term = term * mapped[k];
      out += term;
    }
    next_monomial(alpha);
  }
  return out;
}

std::string Polynomial::to_string(const std::string& prefix) const {
  if (coeffs_.empty()) return "0";
  std::string out;
  MultiIndex alpha(static_cast<std::size_t>(dims_), 0);
  bool first = true;
  for (double c : coeffs_) {
    if (c != 0.0) {
      const bool negative = std::signbit(c);
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      const double mag = std::fabs(c);
      std::string factors;
      for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (alpha[k] == 0) continue;
        if (!factors.empty()) factors += "*";
        factors += prefix + std::to_string(k + 1);
        if (alpha[k] > 1) factors += "^" + std::to_string(alpha[k]);
      }
      if (factors.empty()) {
        out += format_double(mag);
      } else if (mag == 1.0) {
        out += factors;
      } else {
        out += format_double(mag) + "*" + factors;
      }
      first = false;
    }
    next_monomial(alpha);
  }
  return out;
}

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, int dims, const std::string& prefix)
      : text_(text), dims_(dims), prefix_(prefix) {}

  Polynomial parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    Polynomial acc(dims_);
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    acc += term() * sign;
    skip_ws();
    while (!at_end()) {
      const char op = peek();
      if (op != '+' && op != '-') fail(std::string("unexpected '") + op + "'");
      ++pos_;
      acc += term() * (op == '-' ? -1.0 : 1.0);
      skip_ws();
    }
    return acc;
  }

 private:
  Polynomial term() {
    Polynomial t = factor();
    skip_ws();
    while (!at_end() && peek() == '*') {
      ++pos_;
      t = t * factor();
      skip_ws();
    }
    return t;
  }

  Polynomial factor() {
    skip_ws();
    if (at_end()) fail("expected a number or variable");
    if (text_.compare(pos_, prefix_.size(), prefix_) == 0 && pos_ + prefix_.size() < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + prefix_.size()]))) {
      pos_ += prefix_.size();
      const int index = integer();
      if (index < 1 || index > dims_)
        fail("variable " + prefix_ + std::to_string(index) + " out of range (1.." + std::to_string(dims_) + ")");
      int power = 1;
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        skip_ws();
        power = integer();
      }
      MultiIndex alpha(static_cast<std::size_t>(dims_), 0);
      alpha[static_cast<std::size_t>(index - 1)] = power;
      return Polynomial::monomial(alpha);
    }
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr == begin) fail("expected a number or variable");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return Polynomial::constant(dims_, value);
  }

  int integer() {
    int value = 0;
    const char* begin = text_.data() + pos_;
    auto res = std::from_chars(begin, text_.data() + text_.size(), value);
    if (res.ec != std::errc() || res.ptr == begin || value < 0) fail("expected a non-negative integer");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return value;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("malformed polynomial \"" + text_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  const std::string& text_;
  int dims_;
  std::string prefix_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, int dims, const std::string& prefix) {
  return PolyParser(text, dims, prefix).parse();
}

}  // namespace rkf
