#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpf/exact.hpp"
#include "mpf/formula.hpp"

namespace mpf {

enum class Objective { min_a_norm1, min_k_norm1_capped };

[[nodiscard]] std::string to_string(Objective o);

/// min ||a||_1 s.t. V(k^-alpha...) a = e1 over candidate exponents k_j = j,
/// j in [max_exponent].
struct LpProblem {
  int m = 1;
  int alpha = 2;
  int max_exponent = 1;
  Objective objective = Objective::min_a_norm1;
  std::optional<Rational> cap;  // only for min_k_norm1_capped
};

struct LpSolution {
  int alpha = 2;
  int m = 1;
  Objective objective = Objective::min_a_norm1;
  std::vector<std::int64_t> support;  // ascending exponents with nonzero coefficient
  RationalVector coefficients;
  Rational a_norm1;
  std::int64_t k_norm1 = 0;
  int max_exponent = 0;     // candidate bound M the solution was found with
  bool exhaustive = false;  // provably optimal over every support in [M]

  [[nodiscard]] MpfFormula to_formula() const;
  /// Formula schema plus a_norm1, k_norm1, objective, exhaustive.
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Exact-rational simplex (Bland's rule) on the split a = a+ - a-.
/// Throws Infeasible when max_exponent < m - alpha/2 + 1.
[[nodiscard]] LpSolution l1_min_lp(const LpProblem& p);

/// Optimal LP solution for every candidate bound M in [m - alpha/2 + 1, M_max],
/// warm-starting each solve from the previous optimal basis.
[[nodiscard]] std::vector<LpSolution> l1_min_lp_sweep(int m, int alpha, int max_exponent);

enum class SearchMode {
  lp_sweep,  // best over the per-M LP optima (reproduces the published tables)
  subsets,   // every size-(m - alpha/2 + 1) support of [M_max]; bounded to m <= 6
};

inline constexpr int kExhaustiveMaxM = 6;

/// Minimizes ||a||_1 ||k||_1; ties go to smaller ||k||_1, then the
/// lexicographically smaller support.
[[nodiscard]] LpSolution search_min_product(int m, int alpha, int max_exponent,
                                            SearchMode mode = SearchMode::lp_sweep);

/// Minimizes ||k||_1 subject to ||a||_1 <= cap; ties go to smaller ||a||_1,
/// then the lexicographically smaller support.
[[nodiscard]] LpSolution search_min_k1_capped(int m, int alpha, const Rational& cap, int max_exponent,
                                              SearchMode mode = SearchMode::lp_sweep);

/// Candidate support scored for the subset search.
struct SupportCandidate {
  std::vector<std::int64_t> support;
  RationalVector coefficients;
  Rational a_norm1;
  std::int64_t k_norm1 = 0;
};

/// Exhaustive best support over all size-(m - alpha/2 + 1) subsets of [M].
/// OpenMP-parallel over the subsets; the serial variant is the reference the
/// parallel kernel is tested against. Returns nullopt if no support meets the
/// cap.
[[nodiscard]] std::optional<SupportCandidate> best_support(int m, int alpha, int max_exponent, Objective objective,
                                                           const std::optional<Rational>& cap = std::nullopt);
[[nodiscard]] std::optional<SupportCandidate> best_support_serial(int m, int alpha, int max_exponent,
                                                                  Objective objective,
                                                                  const std::optional<Rational>& cap = std::nullopt);

/// Exact coefficients of the square moment system on the given support.
[[nodiscard]] RationalVector support_coefficients(int m, int alpha, const std::vector<std::int64_t>& support);

/// Odd query multiplier for robust oblivious amplitude amplification:
/// n = 2l + 1 with l = ceil(pi / (4 asin(1 / a_norm1)) - 1/2).
[[nodiscard]] int oaa_multiplier(double a_norm1);

}  // namespace mpf
