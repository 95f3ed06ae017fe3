#include "mpf/exact.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "mpf/errors.hpp"

namespace mpf {

namespace {

bool is_decimal_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (!is_decimal_integer(s)) throw ParseError("malformed rational '" + std::string(whole) + "'");
  std::string digits(s.front() == '+' ? s.substr(1) : s);
  return mpz_class(digits, 10);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text), mpz_class(1));
  const mpz_class den = parse_integer(text.substr(slash + 1), text);
  if (den <= 0) throw ParseError("rational '" + std::string(text) + "' needs a positive denominator");
  return Rational(parse_integer(text.substr(0, slash), text), den);
}

double Rational::to_double() const {
  // mpq_get_d truncates and does not survive huge components; go through
  // mpf with enough bits for a correctly scaled double.
  mpf_class f(0, 128);
  f = value_;
  return f.get_d();
}

std::string Rational::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& base, int exponent) {
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.raw().get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.raw().get_den_mpz_t(), e);
  if (exponent < 0) {
    if (base.is_zero()) throw std::domain_error("zero to a negative power");
    std::swap(num, den);
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }
  return Rational(num, den);
}

Rational norm1(std::span<const Rational> v) {
  Rational s;
  for (const auto& x : v) s += abs(x);
  return s;
}

Rational sum(std::span<const Rational> v) {
  Rational s;
  for (const auto& x : v) s += x;
  return s;
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionMismatch("matrix dimensions must be positive");
  if (entries_.size() != rows * cols) throw DimensionMismatch("entry count does not match rows x cols");
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalVector solve_exact(const RationalMatrix& a, std::span<const Rational> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("solve_exact needs a square matrix");
  if (b.size() != n) throw DimensionMismatch("right-hand side length differs from matrix size");

  RationalMatrix work = a;
  RationalVector rhs(b.begin(), b.end());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    Rational best = abs(work(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      Rational cand = abs(work(r, col));
      if (cand > best) {
        best = std::move(cand);
        pivot = r;
      }
    }
    if (best.is_zero()) throw SingularMatrix("zero pivot column " + std::to_string(col));
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(work(col, c), work(pivot, c));
      std::swap(rhs[col], rhs[pivot]);
    }
    const Rational inv = Rational(1) / work(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (work(r, col).is_zero()) continue;
      const Rational f = work(r, col) * inv;
      for (std::size_t c = col + 1; c < n; ++c) work(r, c) -= f * work(col, c);
      work(r, col) = 0;
      rhs[r] -= f * rhs[col];
    }
  }
  RationalVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= work(i, c) * x[c];
    x[i] = acc / work(i, i);
  }
  return x;
}

RationalVector residual(const RationalMatrix& a, std::span<const Rational> x, std::span<const Rational> b) {
  if (x.size() != a.cols() || b.size() != a.rows()) throw DimensionMismatch("residual operands do not conform");
  RationalVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    Rational acc;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * x[c];
    out[r] = acc - b[r];
  }
  return out;
}

bool is_zero_vector(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.is_zero(); });
}

RationalVector vandermonde_closed_form(std::span<const Rational> k) {
  const std::size_t n = k.size();
  std::vector<Rational> sq(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (k[j].is_zero()) throw DuplicateExponent("exponent must be nonzero");
    sq[j] = k[j] * k[j];
  }
  RationalVector a(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational num = 1;
    Rational den = 1;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == j) continue;
      const Rational gap = sq[j] - sq[q];
      if (gap.is_zero()) throw DuplicateExponent("exponents " + std::to_string(j) + " and " + std::to_string(q) + " coincide");
      // k_j^2 / (k_j^2 - k_q^2)
      num *= sq[j];
      den *= gap;
    }
    a[j] = num / den;
  }
  return a;
}

RationalVector vandermonde_closed_form(std::span<const std::int64_t> k) {
  std::vector<Rational> r;
  r.reserve(k.size());
  for (auto v : k) r.emplace_back(static_cast<long>(v));
  return vandermonde_closed_form(r);
}

std::size_t moment_rows(int alpha, int m) {
  if (alpha < 2 || alpha % 2 != 0) throw std::invalid_argument("base order must be even and >= 2");
  if (2 * m < alpha) throw std::invalid_argument("order 2m must be at least the base order");
  return static_cast<std::size_t>(m - alpha / 2 + 1);
}

RationalMatrix generalized_vandermonde(int alpha, int m, std::span<const std::int64_t> k) {
  const std::size_t rows = moment_rows(alpha, m);
  if (k.empty()) throw DimensionMismatch("no exponents");
  RationalMatrix v(rows, k.size());
  for (std::size_t c = 0; c < k.size(); ++c) {
    if (k[c] == 0) throw DuplicateExponent("exponent must be nonzero");
    const Rational inv(1, k[c]);
    v(0, c) = 1;
    for (std::size_t r = 1; r < rows; ++r) {
      const int power = alpha + 2 * static_cast<int>(r - 1);
      v(r, c) = pow(inv, power);
    }
  }
  return v;
}

RationalVector unit_e1(std::size_t n) {
  RationalVector e(n);
  if (n > 0) e[0] = 1;
  return e;
}

}  // namespace mpf
