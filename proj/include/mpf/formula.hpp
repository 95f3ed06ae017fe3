#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpf/exact.hpp"

namespace mpf {

/// Integer-exponent multiproduct formula
///   U(Delta) = sum_j a_j U_alpha^{k_j}(Delta / k_j)
/// correct to order 2m. Construction validates every invariant: ascending
/// distinct positive exponents, m - alpha/2 + 1 terms, and an exactly zero
/// generalized Vandermonde residual (which includes sum a_j = 1).
class MpfFormula {
 public:
  MpfFormula(int base_order, int order, std::vector<std::int64_t> exponents, RationalVector coefficients);

  [[nodiscard]] int base_order() const { return base_order_; }
  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int m() const { return order_ / 2; }
  [[nodiscard]] const std::vector<std::int64_t>& exponents() const { return exponents_; }
  [[nodiscard]] const RationalVector& coefficients() const { return coefficients_; }
  [[nodiscard]] std::size_t size() const { return exponents_.size(); }

  [[nodiscard]] Rational a_norm1() const { return norm1(coefficients_); }
  [[nodiscard]] std::int64_t k_norm1() const;
  [[nodiscard]] std::int64_t k_max() const { return exponents_.back(); }
  [[nodiscard]] std::vector<double> coefficients_as_double() const;

  [[nodiscard]] nlohmann::json to_json() const;
  /// Parses the formula schema; throws ParseError on a malformed document and
  /// InvalidFormula when the payload violates an invariant.
  static MpfFormula from_json(const nlohmann::json& j);

 private:
  int base_order_;
  int order_;
  std::vector<std::int64_t> exponents_;
  RationalVector coefficients_;
};

/// Exact generalized-Vandermonde residual of the given exponents/coefficients
/// (no invariant checks beyond dimensions).
[[nodiscard]] RationalVector formula_residual(int alpha, int m, std::span<const std::int64_t> k,
                                              std::span<const Rational> a);

/// Real-exponent formula used by the Chebyshev constructions.
struct RealMpf {
  int order = 0;
  std::vector<double> interpolation_points;  // x_j, strictly increasing
  std::vector<double> real_exponents;        // 1 / sqrt(x_j), strictly decreasing
  std::vector<double> coefficients;

  [[nodiscard]] int m() const { return order / 2; }
  [[nodiscard]] double a_norm1() const;
  [[nodiscard]] double k_norm1() const;
};

}  // namespace mpf
