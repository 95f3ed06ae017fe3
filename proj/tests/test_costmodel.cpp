#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpf/construct.hpp"
#include "mpf/costmodel.hpp"
#include "mpf/optimize.hpp"

using namespace mpf;

namespace {

double bisect_w(double x) {
  double lo = 0, hi = std::max(1.0, x);
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return lo;
}

MpfFormula table_m2() { return MpfFormula(2, 4, {1, 2}, {Rational(-1, 3), Rational(4, 3)}); }

}  // namespace

TEST_CASE("single-step and accumulated bounds") {
  CHECK(single_step_error_bound(1.0, 1, 1.0) == doctest::Approx(2 * std::numbers::e / 6));
  CHECK(single_step_error_bound(-1.0, 1, 1.0) == doctest::Approx(2 * std::numbers::e / 6));
  CHECK(single_step_error_bound(0.0, 3, 2.0) == 0);
  // 2 * 5/3 * 0.1^5 e^0.1 / 120
  CHECK(single_step_error_bound(0.1, 2, 5.0 / 3.0) == doctest::Approx(2 * (5.0 / 3.0) * 1e-5 * std::exp(0.1) / 120));
  // large orders go through lgamma without overflow
  CHECK(std::isfinite(single_step_error_bound(0.5, 200, 3.0)));

  const double e1 = single_step_error_bound(0.5, 2, 5.0 / 3.0);
  CHECK(accumulated_error_bound(1.0, 2, 2, 5.0 / 3.0) == doctest::Approx(e1 * 2 * (1 + e1)));
  CHECK(accumulated_error_bound(1.0, 1, 2, 5.0 / 3.0) == doctest::Approx(single_step_error_bound(1.0, 2, 5.0 / 3.0)));
  CHECK_THROWS((void)accumulated_error_bound(1.0, 0, 2, 1.0));
}

TEST_CASE("step count") {
  CHECK(step_count({1, 1}, 3, 4.0 / 3.0) == 2);
  // the 1/ln 2 floor
  CHECK(step_count({10, 1}, 30, 2.0) == static_cast<std::int64_t>(std::ceil(10 / std::log(2.0))));
  for (double tl : {1.0, 7.0, 100.0}) {
    std::int64_t prev = 0;
    for (double eps : {1e-2, 1e-4, 1e-8, 1e-12}) {
      const std::int64_t r = step_count({tl, eps}, 3, 1.5);
      CHECK(r >= prev);
      CHECK(accumulated_error_bound(tl, r, 3, 1.5) <= eps);
      prev = r;
    }
  }
  CHECK_THROWS_AS(SimulationTask(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(SimulationTask(1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(SimulationTask(-1, 0.1), std::invalid_argument);
}

TEST_CASE("lambert w") {
  CHECK(lambert_w(0) == 0);
  CHECK(lambert_w(1.0) == doctest::Approx(0.5671432904097837).epsilon(1e-15));
  CHECK(lambert_w(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {1e-8, 0.3, 5.0, 42.0, 1e3, 1e8}) {
    CHECK(lambert_w(x) == doctest::Approx(bisect_w(x)).epsilon(1e-13));
    const double w = lambert_w(x);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-13));
  }
  CHECK_THROWS((void)lambert_w(-0.1));
}

TEST_CASE("order selection") {
  CHECK(choose_order({std::numbers::e, 1}) == 2);
  int prev = 2;
  for (int i = 1; i <= 40; ++i) {
    const int o = choose_order({1.0, std::pow(10.0, -0.5 * i)});
    CHECK(o % 2 == 0);
    CHECK(o >= prev);
    const double target = std::exp(bisect_w(std::log(std::pow(10.0, 0.5 * i))));
    CHECK(o >= target - 1e-9);
    CHECK(o < std::max(2.0, target) + 2);
    prev = o;
  }
}

TEST_CASE("cost for a fixed step count") {
  const MpfFormula f = table_m2();
  const CostReport u = cost_for_steps(1, f, false);
  CHECK(u.u2_queries == 3);
  CHECK(u.oaa_multiplier == 1);
  CHECK(u.extra_gates == 2);
  CHECK(u.progmpf_queries == 2);
  CHECK(u.success_probability_floor == doctest::Approx(9.0 / 25.0));
  CHECK(u.error_inflation_constant == 1);
  CHECK(cost_for_steps(4, f, false).success_probability_floor == doctest::Approx(std::pow(0.6, 8)));

  const CostReport z = cost_for_steps(0, f, true, 1e-3);
  CHECK(z.u2_queries == 0);
  CHECK(z.success_probability_floor == 1);

  for (std::int64_t r : {1, 5, 17}) {
    const CostReport a = cost_for_steps(r, f, true, 1e-3);
    CHECK(a.oaa_multiplier == 3);
    CHECK(a.u2_queries == 3 * r * 3);
    CHECK(a.success_probability_floor == doctest::Approx(1 - 1e-3));
  }
  const auto j = cost_for_steps(2, f, true, 0.01).to_json();
  CHECK(j["u2_queries"] == 18);
  CHECK(j["oaa_multiplier"] == 3);

  const CostReport t = total_cost({1, 1}, f, false);
  CHECK(t.steps_r == step_count({1, 1}, 2, 5.0 / 3.0));
  CHECK(total_cost({0, 0.5}, f, true).steps_r == 0);
}

TEST_CASE("programmable formula cost") {
  const MpfFormula f(2, 6, {1, 2, 6}, {Rational(1, 105), Rational(-1, 6), Rational(81, 70)});
  const ProgrammableCost p = progmpf_cost(f, 9, 3, 1.0, 1e-3);
  CHECK(p.queries_per_step == 6);
  CHECK(p.precision == 27000);
  CHECK(progmpf_cost(f, 2, 2, 0.3, 0.1).precision == 12);
  CHECK_THROWS((void)progmpf_cost(f, 0, 3, 1.0, 1e-3));
}

TEST_CASE("polylogarithmic scaling over a task grid") {
  // sup over the grid measured with an independent script: 2.4165 and 15.84
  constexpr double kStepsPerTime = 2.5;
  constexpr double kQueriesPerTimeLog2 = 16.0;
  for (int i = 0; i < 20; ++i) {
    const double tl = std::pow(10.0, 3.0 * i / 19.0);
    for (int j = 0; j < 5; ++j) {
      const double eps = std::pow(10.0, -1.0 - 11.0 * j / 4.0);
      const SimulationTask task(tl, eps);
      const int order = choose_order(task);
      const MpfFormula f = rounded_mpf(order / 2);
      const CostReport c = total_cost(task, f, true);
      CAPTURE(tl);
      CAPTURE(eps);
      CHECK(accumulated_error_bound(tl, c.steps_r, f.m(), f.a_norm1().to_double()) <= eps);
      CHECK(static_cast<double>(c.steps_r) / tl <= kStepsPerTime);
      const double lg = std::log(tl / eps);
      CHECK(static_cast<double>(c.u2_queries) / (tl * lg * lg) <= kQueriesPerTimeLog2);
    }
  }
}
