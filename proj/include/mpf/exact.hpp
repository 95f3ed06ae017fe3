#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpf {

/// Exact fraction in canonical form: positive denominator, coprime parts,
/// zero stored as 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : value_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Accepts "n", "-n", "n/d" in decimal. Throws ParseError.
  static Rational parse(std::string_view text);

  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] double to_double() const;
  /// "num/den"; integers keep the "/1" suffix so the output round-trips.
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class value_{0};
};

[[nodiscard]] Rational abs(const Rational& r);
/// Integer power with integer exponent of either sign. Throws if base is zero
/// and exponent negative.
[[nodiscard]] Rational pow(const Rational& base, int exponent);

using RationalVector = std::vector<Rational>;

[[nodiscard]] Rational norm1(std::span<const Rational> v);
[[nodiscard]] Rational sum(std::span<const Rational> v);

/// Dense row-major matrix of rationals.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static RationalMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> entries_;
};

/// Solves the square system A x = b exactly by Gaussian elimination with
/// largest-magnitude pivoting. Throws SingularMatrix, DimensionMismatch.
[[nodiscard]] RationalVector solve_exact(const RationalMatrix& a, std::span<const Rational> b);

/// A x - b, exactly.
[[nodiscard]] RationalVector residual(const RationalMatrix& a, std::span<const Rational> x,
                                      std::span<const Rational> b);

[[nodiscard]] bool is_zero_vector(std::span<const Rational> v);

/// a_j = prod_{q != j} 1 / (1 - (k_q/k_j)^2), the solution of V(k^-2) a = e1 for
/// base order 2. Throws DuplicateExponent.
[[nodiscard]] RationalVector vandermonde_closed_form(std::span<const Rational> k);
[[nodiscard]] RationalVector vandermonde_closed_form(std::span<const std::int64_t> k);

/// Number of moment conditions for a base-order-alpha formula of order 2m:
/// rows carry powers {0, alpha, alpha+2, ..., 2m-2}.
[[nodiscard]] std::size_t moment_rows(int alpha, int m);

/// Generalized Vandermonde matrix whose row i holds k_j^{-e_i} for the powers
/// above. Throws std::invalid_argument unless alpha is even, alpha >= 2 and
/// 2m >= alpha.
[[nodiscard]] RationalMatrix generalized_vandermonde(int alpha, int m, std::span<const std::int64_t> k);

/// The first unit vector of the given length.
[[nodiscard]] RationalVector unit_e1(std::size_t n);

}  // namespace mpf
