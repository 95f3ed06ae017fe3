#include "mpf/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mpf/errors.hpp"

namespace mpf {

namespace {

void require_positive(int m) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
}

double node_angle(int j, int m) { return std::numbers::pi * (2.0 * j - 1.0) / (4.0 * m); }

// prod_{q != j} 1 / (1 - x_j / x_q), the Vandermonde solution written in the
// interpolation points x = k^-2.
std::vector<double> vandermonde_real(const std::vector<double>& x) {
  std::vector<double> a(x.size(), 1.0);
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t q = 0; q < x.size(); ++q)
      if (q != j) a[j] /= 1.0 - x[j] / x[q];
  return a;
}

void check_sum(const RealMpf& f) {
  double s = 0;
  for (double c : f.coefficients) s += c;
  if (std::abs(s - 1.0) > 1e-12 * std::max(1.0, f.a_norm1()))
    throw std::logic_error("real formula coefficients do not sum to one (order " + std::to_string(f.order) + ")");
}

}  // namespace

std::vector<double> chebyshev_nodes(int m) {
  require_positive(m);
  std::vector<double> x(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    const double s = std::sin(node_angle(j, m));
    x[static_cast<std::size_t>(j - 1)] = s * s;
  }
  return x;
}

RealMpf chebyshev_mpf(int m) {
  RealMpf f;
  f.order = 2 * m;
  f.interpolation_points = chebyshev_nodes(m);
  for (int j = 1; j <= m; ++j) {
    const double theta = node_angle(j, m);
    f.real_exponents.push_back(1.0 / std::sin(theta));
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    f.coefficients.push_back(sign / (m * std::tan(theta)));
  }
  check_sum(f);
  return f;
}

RealMpf halved_chebyshev_mpf(int m) {
  require_positive(m);
  RealMpf f;
  f.order = 2 * m;
  std::vector<double> all = chebyshev_nodes(2 * m);
  f.interpolation_points.assign(all.begin(), all.begin() + m);
  for (int j = 1; j <= m; ++j) f.real_exponents.push_back(1.0 / std::sin(node_angle(j, 2 * m)));
  f.coefficients = vandermonde_real(f.interpolation_points);
  check_sum(f);
  return f;
}

double ScalePolicy::scale(int m) const {
  if (explicit_scale) return *explicit_scale;
  return fraction_of_bound * std::sqrt(8.0) * m / std::numbers::pi;
}

MpfFormula rounded_mpf(int m, const ScalePolicy& policy) {
  require_positive(m);
  const double scale = policy.scale(m);
  if (!(scale > 0)) throw std::invalid_argument("scale factor must be positive");
  std::vector<std::int64_t> k;
  k.reserve(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j)
    k.push_back(static_cast<std::int64_t>(std::ceil(scale / std::sin(node_angle(j, 2 * m)))));
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw RoundingCollision("scale " + std::to_string(scale) + " rounds two exponents of order " +
                            std::to_string(2 * m) + " to the same integer");
  RationalVector a = vandermonde_closed_form(k);
  return MpfFormula(2, 2 * m, std::move(k), std::move(a));
}

MpfFormula chin_mpf(int m, int alpha) {
  require_positive(m);
  const std::size_t terms = moment_rows(alpha, m);
  std::vector<std::int64_t> k(terms);
  for (std::size_t j = 0; j < terms; ++j) k[j] = static_cast<std::int64_t>(j + 1);
  RationalVector a = alpha == 2 ? vandermonde_closed_form(k)
                                : solve_exact(generalized_vandermonde(alpha, m, k), unit_e1(terms));
  return MpfFormula(alpha, 2 * m, std::move(k), std::move(a));
}

ConditionReport condition_report(const MpfFormula& f) {
  ConditionReport r;
  r.order = f.order();
  r.a_norm1 = f.a_norm1().to_double();
  r.k_norm1 = static_cast<double>(f.k_norm1());
  r.product = r.a_norm1 * r.k_norm1;
  return r;
}

ConditionReport condition_report(const RealMpf& f) {
  ConditionReport r;
  r.order = f.order;
  r.a_norm1 = f.a_norm1();
  r.k_norm1 = f.k_norm1();
  r.product = r.a_norm1 * r.k_norm1;
  return r;
}

}  // namespace mpf
