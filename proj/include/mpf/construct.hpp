#pragma once

#include <optional>
#include <vector>

#include "mpf/formula.hpp"

namespace mpf {

/// x_j = sin^2(pi (2j - 1) / (4m)), j = 1..m; strictly increasing in (0, 1).
[[nodiscard]] std::vector<double> chebyshev_nodes(int m);

/// Real-exponent formula on the m Chebyshev nodes with the closed-form
/// coefficients ((-1)^{j+1} / m) cot(pi (2j - 1) / (4m)).
[[nodiscard]] RealMpf chebyshev_mpf(int m);

/// Real-exponent formula on the first m of the 2m Chebyshev nodes, with
/// coefficients from the Vandermonde product formula.
[[nodiscard]] RealMpf halved_chebyshev_mpf(int m);

/// Scale factor K for rounding exponents k_j = ceil(K / sqrt(x_j^{(2m)})).
/// Uniqueness of the rounded integers needs K < sqrt(8) m / pi; the policy
/// picks K as a fraction of that bound unless an explicit K is given.
struct ScalePolicy {
  double fraction_of_bound = 0.999;
  std::optional<double> explicit_scale;

  [[nodiscard]] double scale(int m) const;
};

/// Integer-exponent order-2m formula with base order 2 from the rounded
/// halved Chebyshev exponents; exponents ascending, coefficients exact.
/// Throws RoundingCollision if two exponents round to the same integer.
[[nodiscard]] MpfFormula rounded_mpf(int m, const ScalePolicy& policy = {});

/// Arithmetic exponents k_j = j with exact coefficients. Base order 2 uses
/// the closed form; higher base orders solve the generalized system.
[[nodiscard]] MpfFormula chin_mpf(int m, int alpha = 2);

struct ConditionReport {
  int order = 0;
  double a_norm1 = 0;  // condition number
  double k_norm1 = 0;  // base-sequence queries per step; integral for MpfFormula
  double product = 0;
};

[[nodiscard]] ConditionReport condition_report(const MpfFormula& f);
[[nodiscard]] ConditionReport condition_report(const RealMpf& f);

}  // namespace mpf
