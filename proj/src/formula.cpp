#include "mpf/formula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpf/errors.hpp"

namespace mpf {

RationalVector formula_residual(int alpha, int m, std::span<const std::int64_t> k, std::span<const Rational> a) {
  const RationalMatrix v = generalized_vandermonde(alpha, m, k);
  return residual(v, a, unit_e1(v.rows()));
}

MpfFormula::MpfFormula(int base_order, int order, std::vector<std::int64_t> exponents, RationalVector coefficients)
    : base_order_(base_order), order_(order), exponents_(std::move(exponents)), coefficients_(std::move(coefficients)) {
  if (base_order_ < 2 || base_order_ % 2 != 0) throw InvalidFormula("base order must be even and >= 2");
  if (order_ < base_order_ || order_ % 2 != 0) throw InvalidFormula("order must be even and >= base order");
  const std::size_t expected = moment_rows(base_order_, order_ / 2);
  if (exponents_.size() != expected || coefficients_.size() != expected)
    throw InvalidFormula("order " + std::to_string(order_) + " with base " + std::to_string(base_order_) +
                         " needs " + std::to_string(expected) + " terms");
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] <= 0) throw InvalidFormula("exponents must be positive");
    if (i > 0 && exponents_[i] <= exponents_[i - 1]) throw InvalidFormula("exponents must be strictly ascending");
  }
  if (!is_zero_vector(formula_residual(base_order_, m(), exponents_, coefficients_)))
    throw InvalidFormula("coefficients do not satisfy the moment conditions");
}

std::int64_t MpfFormula::k_norm1() const {
  return std::accumulate(exponents_.begin(), exponents_.end(), std::int64_t{0});
}

std::vector<double> MpfFormula::coefficients_as_double() const {
  std::vector<double> out;
  out.reserve(coefficients_.size());
  for (const auto& c : coefficients_) out.push_back(c.to_double());
  return out;
}

nlohmann::json MpfFormula::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : coefficients_) coeffs.push_back(c.to_string());
  return {{"alpha", base_order_}, {"order", order_}, {"exponents", exponents_}, {"coefficients", coeffs}};
}

MpfFormula MpfFormula::from_json(const nlohmann::json& j) {
  try {
    std::vector<std::int64_t> k = j.at("exponents").get<std::vector<std::int64_t>>();
    RationalVector a;
    for (const auto& c : j.at("coefficients")) {
      if (c.is_string()) a.push_back(Rational::parse(c.get<std::string>()));
      else if (c.is_number_integer()) a.emplace_back(c.get<long>());
      else throw ParseError("coefficient must be a \"num/den\" string");
    }
    return MpfFormula(j.at("alpha").get<int>(), j.at("order").get<int>(), std::move(k), std::move(a));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("formula json: ") + e.what());
  }
}

double RealMpf::a_norm1() const {
  double s = 0;
  for (double c : coefficients) s += std::abs(c);
  return s;
}

double RealMpf::k_norm1() const { return std::accumulate(real_exponents.begin(), real_exponents.end(), 0.0); }

}  // namespace mpf
