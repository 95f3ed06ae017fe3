#include "mpf/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mpf/errors.hpp"

namespace mpf {

std::string to_string(Objective o) {
  return o == Objective::min_a_norm1 ? "min_a1k1" : "min_k1_capped";
}

MpfFormula LpSolution::to_formula() const { return MpfFormula(alpha, 2 * m, support, coefficients); }

nlohmann::json LpSolution::to_json() const {
  nlohmann::json j = to_formula().to_json();
  j["a_norm1"] = a_norm1.to_string();
  j["a_norm1_value"] = a_norm1.to_double();
  j["k_norm1"] = k_norm1;
  j["objective"] = to_string(objective);
  j["exhaustive"] = exhaustive;
  j["max_exponent"] = max_exponent;
  return j;
}

RationalVector support_coefficients(int m, int alpha, const std::vector<std::int64_t>& support) {
  if (alpha == 2) return vandermonde_closed_form(support);
  const RationalMatrix v = generalized_vandermonde(alpha, m, support);
  if (v.rows() != v.cols()) throw DimensionMismatch("support size must equal the number of moment rows");
  return solve_exact(v, unit_e1(v.rows()));
}

namespace {

// Revised simplex for  min sum(x)  s.t.  [V, -V] x = e1,  x >= 0, with the
// explicit basis inverse kept exact. Variable 2(k-1) is a+_k and 2(k-1)+1 is
// a-_k, so Bland's smallest-index rule follows increasing exponent.
class SplitL1Simplex {
 public:
  SplitL1Simplex(int m, int alpha) : m_(m), alpha_(alpha), rows_(moment_rows(alpha, m)), binv_(rows_, rows_) {
    std::vector<std::int64_t> seed(rows_);
    for (std::size_t i = 0; i < rows_; ++i) seed[i] = static_cast<std::int64_t>(i + 1);
    for (auto k : seed) add_exponent(k);

    // Start from the square solution on {1..R}: each coefficient is nonzero,
    // so picking a+ or a- by its sign gives a feasible basis.
    const RationalVector a = support_coefficients(m_, alpha_, seed);
    RationalMatrix b(rows_, rows_);
    basis_.resize(rows_);
    xb_.resize(rows_);
    for (std::size_t j = 0; j < rows_; ++j) {
      const bool positive = a[j].sign() > 0;
      basis_[j] = 2 * j + (positive ? 0 : 1);
      xb_[j] = abs(a[j]);
      for (std::size_t r = 0; r < rows_; ++r) b(r, j) = columns_[basis_[j]][r];
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      RationalVector e(rows_);
      e[i] = 1;
      const RationalVector col = solve_exact(b, e);
      for (std::size_t r = 0; r < rows_; ++r) binv_(r, i) = col[r];
    }
  }

  void add_exponent(std::int64_t k) {
    RationalVector col(rows_);
    const Rational inv(1, k);
    col[0] = 1;
    for (std::size_t r = 1; r < rows_; ++r) col[r] = pow(inv, alpha_ + 2 * static_cast<int>(r - 1));
    RationalVector neg(rows_);
    for (std::size_t r = 0; r < rows_; ++r) neg[r] = -col[r];
    columns_.push_back(std::move(col));
    columns_.push_back(std::move(neg));
    max_exponent_ = k;
  }

  void solve() {
    for (;;) {
      // duals y = c_B^T B^-1 with unit costs
      RationalVector y(rows_);
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t r = 0; r < rows_; ++r) y[i] += binv_(r, i);

      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < columns_.size() && !entering; ++j) {
        if (is_basic(j)) continue;
        Rational reduced = 1;
        for (std::size_t r = 0; r < rows_; ++r) reduced -= y[r] * columns_[j][r];
        if (reduced.sign() < 0) entering = j;
      }
      if (!entering) return;

      RationalVector u(rows_);
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t r = 0; r < rows_; ++r) u[i] += binv_(i, r) * columns_[*entering][r];

      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (u[i].sign() <= 0) continue;
        Rational ratio = xb_[i] / u[i];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          best_ratio = std::move(ratio);
          leave = i;
        }
      }
      // Unit costs on nonnegative variables keep the objective bounded below.
      if (!leave) throw std::logic_error("simplex: unbounded direction in a bounded problem");
      pivot(*leave, *entering, u);
    }
  }

  [[nodiscard]] LpSolution solution() const {
    LpSolution s;
    s.alpha = alpha_;
    s.m = m_;
    s.objective = Objective::min_a_norm1;
    s.max_exponent = static_cast<int>(max_exponent_);
    RationalVector x(columns_.size());
    for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = xb_[i];
    for (std::size_t v = 0; v + 1 < columns_.size(); v += 2) {
      Rational a = x[v] - x[v + 1];
      if (a.is_zero()) continue;
      s.support.push_back(static_cast<std::int64_t>(v / 2 + 1));
      s.k_norm1 += static_cast<std::int64_t>(v / 2 + 1);
      s.a_norm1 += abs(a);
      s.coefficients.push_back(std::move(a));
    }
    return s;
  }

 private:
  [[nodiscard]] bool is_basic(std::size_t j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void pivot(std::size_t row, std::size_t entering, const RationalVector& u) {
    const Rational inv = Rational(1) / u[row];
    for (std::size_t c = 0; c < rows_; ++c) binv_(row, c) *= inv;
    xb_[row] *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row || u[i].is_zero()) continue;
      for (std::size_t c = 0; c < rows_; ++c) binv_(i, c) -= u[i] * binv_(row, c);
      xb_[i] -= u[i] * xb_[row];
    }
    basis_[row] = entering;
  }

  int m_;
  int alpha_;
  std::size_t rows_;
  std::vector<RationalVector> columns_;
  std::vector<std::size_t> basis_;
  RationalMatrix binv_;
  RationalVector xb_;
  std::int64_t max_exponent_ = 0;
};

void check_problem(int m, int alpha, int max_exponent) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const std::size_t rows = moment_rows(alpha, m);
  if (max_exponent < static_cast<int>(rows))
    throw Infeasible("need at least " + std::to_string(rows) + " candidate exponents, got " +
                     std::to_string(max_exponent));
}

bool lex_less(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Strict ordering per objective; both orderings are total over distinct supports.
template <class S>
bool better(const S& x, const S& y, Objective objective) {
  if (objective == Objective::min_a_norm1) {
    const Rational px = x.a_norm1 * Rational(static_cast<long>(x.k_norm1));
    const Rational py = y.a_norm1 * Rational(static_cast<long>(y.k_norm1));
    if (px != py) return px < py;
    if (x.k_norm1 != y.k_norm1) return x.k_norm1 < y.k_norm1;
    return lex_less(x.support, y.support);
  }
  if (x.k_norm1 != y.k_norm1) return x.k_norm1 < y.k_norm1;
  if (x.a_norm1 != y.a_norm1) return x.a_norm1 < y.a_norm1;
  return lex_less(x.support, y.support);
}

bool admissible(const Rational& a_norm1, const std::optional<Rational>& cap) { return !cap || a_norm1 <= *cap; }

// All size-r subsets of [n] in lexicographic order, flattened.
std::vector<std::uint16_t> all_subsets(std::size_t r, int n) {
  std::vector<std::uint16_t> flat;
  std::vector<std::uint16_t> cur(r);
  for (std::size_t i = 0; i < r; ++i) cur[i] = static_cast<std::uint16_t>(i + 1);
  if (static_cast<int>(r) > n) return flat;
  for (;;) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    std::size_t i = r;
    while (i > 0 && cur[i - 1] == n - static_cast<int>(r - i)) --i;
    if (i == 0) return flat;
    ++cur[i - 1];
    for (std::size_t j = i; j < r; ++j) cur[j] = static_cast<std::uint16_t>(cur[j - 1] + 1);
  }
}

SupportCandidate score(int m, int alpha, std::vector<std::int64_t> support) {
  SupportCandidate c;
  c.coefficients = support_coefficients(m, alpha, support);
  c.a_norm1 = norm1(c.coefficients);
  for (auto k : support) c.k_norm1 += k;
  c.support = std::move(support);
  return c;
}

void check_subset_problem(int m, int alpha, int max_exponent, Objective objective, const std::optional<Rational>& cap) {
  check_problem(m, alpha, max_exponent);
  if (max_exponent > 65535) throw std::invalid_argument("candidate bound too large for subset search");
  if (objective == Objective::min_k_norm1_capped && !cap) throw std::invalid_argument("capped objective needs a cap");
}

LpSolution from_candidate(const SupportCandidate& c, int m, int alpha, Objective objective, int max_exponent) {
  LpSolution s;
  s.alpha = alpha;
  s.m = m;
  s.objective = objective;
  s.support = c.support;
  s.coefficients = c.coefficients;
  s.a_norm1 = c.a_norm1;
  s.k_norm1 = c.k_norm1;
  s.max_exponent = max_exponent;
  s.exhaustive = true;
  return s;
}

}  // namespace

std::vector<LpSolution> l1_min_lp_sweep(int m, int alpha, int max_exponent) {
  check_problem(m, alpha, max_exponent);
  SplitL1Simplex lp(m, alpha);
  std::vector<LpSolution> out;
  const auto first = static_cast<int>(moment_rows(alpha, m));
  for (int big_m = first; big_m <= max_exponent; ++big_m) {
    if (big_m > first) lp.add_exponent(big_m);
    lp.solve();
    out.push_back(lp.solution());
  }
  return out;
}

LpSolution l1_min_lp(const LpProblem& p) {
  if (p.objective != Objective::min_a_norm1) throw std::invalid_argument("l1_min_lp solves the min ||a||_1 objective");
  check_problem(p.m, p.alpha, p.max_exponent);
  SplitL1Simplex lp(p.m, p.alpha);
  for (int k = static_cast<int>(moment_rows(p.alpha, p.m)) + 1; k <= p.max_exponent; ++k) lp.add_exponent(k);
  lp.solve();
  return lp.solution();
}

std::optional<SupportCandidate> best_support_serial(int m, int alpha, int max_exponent, Objective objective,
                                                    const std::optional<Rational>& cap) {
  check_subset_problem(m, alpha, max_exponent, objective, cap);
  const std::size_t r = moment_rows(alpha, m);
  const std::vector<std::uint16_t> flat = all_subsets(r, max_exponent);
  std::optional<SupportCandidate> best;
  for (std::size_t off = 0; off < flat.size(); off += r) {
    SupportCandidate c = score(m, alpha, std::vector<std::int64_t>(flat.begin() + off, flat.begin() + off + r));
    if (!admissible(c.a_norm1, cap)) continue;
    if (!best || better(c, *best, objective)) best = std::move(c);
  }
  return best;
}

std::optional<SupportCandidate> best_support(int m, int alpha, int max_exponent, Objective objective,
                                             const std::optional<Rational>& cap) {
  check_subset_problem(m, alpha, max_exponent, objective, cap);
  const std::size_t r = moment_rows(alpha, m);
  const std::vector<std::uint16_t> flat = all_subsets(r, max_exponent);
  const auto count = static_cast<std::ptrdiff_t>(flat.size() / r);
  std::optional<SupportCandidate> best;
#pragma omp parallel
  {
    std::optional<SupportCandidate> local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto off = static_cast<std::size_t>(i) * r;
      SupportCandidate c = score(m, alpha, std::vector<std::int64_t>(flat.begin() + off, flat.begin() + off + r));
      if (!admissible(c.a_norm1, cap)) continue;
      if (!local || better(c, *local, objective)) local = std::move(c);
    }
#pragma omp critical(mpf_best_support)
    {
      if (local && (!best || better(*local, *best, objective))) best = std::move(local);
    }
  }
  return best;
}

LpSolution search_min_product(int m, int alpha, int max_exponent, SearchMode mode) {
  check_problem(m, alpha, max_exponent);
  if (mode == SearchMode::subsets && m <= kExhaustiveMaxM) {
    auto c = best_support(m, alpha, max_exponent, Objective::min_a_norm1);
    if (!c) throw Infeasible("no support found");
    return from_candidate(*c, m, alpha, Objective::min_a_norm1, max_exponent);
  }
  std::vector<LpSolution> sweep = l1_min_lp_sweep(m, alpha, max_exponent);
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (better(sweep[i], sweep[best], Objective::min_a_norm1)) best = i;
  return sweep[best];
}

LpSolution search_min_k1_capped(int m, int alpha, const Rational& cap, int max_exponent, SearchMode mode) {
  check_problem(m, alpha, max_exponent);
  if (cap < Rational(1)) throw std::invalid_argument("cap must be >= 1");
  if (mode == SearchMode::subsets && m <= kExhaustiveMaxM) {
    auto c = best_support(m, alpha, max_exponent, Objective::min_k_norm1_capped, cap);
    if (!c) throw Infeasible("no support of [" + std::to_string(max_exponent) + "] meets the cap");
    return from_candidate(*c, m, alpha, Objective::min_k_norm1_capped, max_exponent);
  }
  std::vector<LpSolution> sweep = l1_min_lp_sweep(m, alpha, max_exponent);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!admissible(sweep[i].a_norm1, cap)) continue;
    if (!best || better(sweep[i], sweep[*best], Objective::min_k_norm1_capped)) best = i;
  }
  if (!best) throw Infeasible("no LP optimum up to M=" + std::to_string(max_exponent) + " meets the cap");
  LpSolution s = sweep[*best];
  s.objective = Objective::min_k_norm1_capped;
  return s;
}

int oaa_multiplier(double a_norm1) {
  if (!(a_norm1 >= 1.0)) throw std::invalid_argument("condition number must be >= 1");
  const double rounds_real = std::numbers::pi / (4.0 * std::asin(1.0 / a_norm1)) - 0.5;
  // Guard the exact boundaries (a_norm1 = 1, 2, ...) against roundoff.
  const auto rounds = static_cast<int>(std::ceil(rounds_real - 1e-12));
  return 2 * std::max(rounds, 0) + 1;
}

}  // namespace mpf
