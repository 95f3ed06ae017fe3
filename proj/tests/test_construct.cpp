#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "mpf/bench.hpp"
#include "mpf/construct.hpp"
#include "mpf/errors.hpp"

using namespace mpf;

namespace {

// sin^2 nodes for m = 8 evaluated at 60 digits (mpmath), frozen.
constexpr double kNodes8[] = {0.0096073597983847754369, 0.084265193848727381461, 0.22221488349019888763,
                              0.40245483899193586608,  0.59754516100806413392, 0.77778511650980111237,
                              0.91573480615127261854,  0.99039264020161522456};

// Independent route: solve V(x) a = e1 with rows x^0..x^{m-1} in floating point.
// Extended precision: at m = 16 the double-precision system loses ~8 digits.
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
VecL floating_vandermonde_solve(const std::vector<double>& x) {
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> v(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      v(r, c) = std::pow(static_cast<long double>(x[static_cast<std::size_t>(c)]), static_cast<long double>(r));
  VecL e = VecL::Zero(m);
  e(0) = 1;
  return v.fullPivLu().solve(e);
}

RationalVector rv(std::initializer_list<const char*> xs) {
  RationalVector v;
  for (const char* x : xs) v.push_back(Rational::parse(x));
  return v;
}

}  // namespace

TEST_CASE("chebyshev nodes") {
  CHECK(chebyshev_nodes(1)[0] == doctest::Approx(0.5).epsilon(1e-15));
  const auto n2 = chebyshev_nodes(2);
  CHECK(n2[0] == doctest::Approx((2 - std::sqrt(2.0)) / 4).epsilon(1e-14));
  CHECK(n2[1] == doctest::Approx((2 + std::sqrt(2.0)) / 4).epsilon(1e-14));
  const auto n8 = chebyshev_nodes(8);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(n8[j] == doctest::Approx(kNodes8[j]).epsilon(1e-14));
    if (j > 0) CHECK(n8[j] > n8[j - 1]);
  }
  CHECK_THROWS((void)chebyshev_nodes(0));
}

TEST_CASE("chebyshev closed-form coefficients") {
  CHECK(chebyshev_mpf(1).coefficients[0] == doctest::Approx(1.0));
  const RealMpf f2 = chebyshev_mpf(2);
  CHECK(f2.coefficients[0] == doctest::Approx((1 + std::sqrt(2.0)) / 2).epsilon(1e-14));
  CHECK(f2.coefficients[1] == doctest::Approx(-(std::sqrt(2.0) - 1) / 2).epsilon(1e-14));

  const RealMpf f16 = chebyshev_mpf(16);
  const VecL oracle = floating_vandermonde_solve(f16.interpolation_points);
  CHECK(f16.a_norm1() == doctest::Approx(static_cast<double>(oracle.lpNorm<1>())).epsilon(1e-9));
  CHECK(f16.a_norm1() == doctest::Approx(2.72777793641832).epsilon(1e-13));  // 60-digit value

  for (int m : {1, 3, 7, 40}) {
    const RealMpf f = chebyshev_mpf(m);
    double s = 0;
    for (double c : f.coefficients) s += c;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 1; j < f.interpolation_points.size(); ++j) {
      CHECK(f.interpolation_points[j] > f.interpolation_points[j - 1]);
      CHECK(f.real_exponents[j] < f.real_exponents[j - 1]);
    }
  }
}

TEST_CASE("chebyshev condition number grows by a bounded step per doubling") {
  // Steps measured at 60 digits approach (2/pi) ln 2 = 0.44127 from below.
  constexpr double kStep = 0.45;
  for (int m = 4; m <= 1024; m *= 2) {
    const double step = chebyshev_mpf(2 * m).a_norm1() - chebyshev_mpf(m).a_norm1();
    CHECK(step > 0);
    CHECK(step <= kStep);
  }
}

TEST_CASE("halved chebyshev formula") {
  const RealMpf h1 = halved_chebyshev_mpf(1);
  CHECK(h1.interpolation_points[0] == doctest::Approx(std::pow(std::sin(std::numbers::pi / 8), 2)));
  CHECK(h1.coefficients[0] == doctest::Approx(1.0));

  const RealMpf h2 = halved_chebyshev_mpf(2);
  CHECK(h2.coefficients[0] == doctest::Approx(1.14065228383603).epsilon(1e-13));
  CHECK(h2.coefficients[1] == doctest::Approx(-0.140652283836026).epsilon(1e-12));
  // direct evaluation of the product at k'_j = 1/sin(pi (2j-1)/16)
  const double k1 = 1 / std::sin(std::numbers::pi / 16), k2 = 1 / std::sin(3 * std::numbers::pi / 16);
  CHECK(h2.coefficients[0] == doctest::Approx(1 / (1 - (k2 / k1) * (k2 / k1))));

  for (int m : {2, 4, 9, 16}) {
    const RealMpf half = halved_chebyshev_mpf(m);
    const RealMpf full = chebyshev_mpf(2 * m);
    for (std::size_t j = 0; j < half.coefficients.size(); ++j)
      CHECK(std::abs(half.coefficients[j]) <= std::abs(full.coefficients[j]) * (1 + 1e-12));
  }
}

TEST_CASE("rounded formulas") {
  const MpfFormula f1 = rounded_mpf(1);
  CHECK(f1.exponents() == std::vector<std::int64_t>{3});
  CHECK(f1.coefficients() == rv({"1"}));

  const MpfFormula f2 = rounded_mpf(2);
  CHECK(f2.exponents() == std::vector<std::int64_t>{4, 10});
  CHECK(f2.coefficients() == rv({"-4/21", "25/21"}));
  CHECK(rounded_mpf(3).exponents() == std::vector<std::int64_t>{5, 8, 21});
  CHECK(rounded_mpf(4).exponents() == std::vector<std::int64_t>{6, 8, 13, 37});

  // ||k||_1 <= C m^2 log m with C fixed at m = 4 (||k||_1 = 64)
  const double c = 64.0 / (16.0 * std::log(4.0));
  for (int m : {4, 8, 16, 32}) {
    const MpfFormula f = rounded_mpf(m);
    CHECK(static_cast<double>(f.k_norm1()) <= c * m * m * std::log(m) * (1 + 1e-12));
    CHECK(f.k_norm1() >= m * (m + 1) / 2);
    CHECK(sum(f.coefficients()) == Rational(1));
  }
  CHECK_THROWS_AS((void)rounded_mpf(4, ScalePolicy{0.999, 0.01}), RoundingCollision);
}

TEST_CASE("rounding shifts coefficients by a bounded relative amount") {
  // max over m in [4, 64] measured at 60 digits: 5.535 (m = 64)
  constexpr double kShift = 6.0;
  for (int m = 4; m <= 64; ++m) {
    const MpfFormula f = rounded_mpf(m);
    RealMpf h = halved_chebyshev_mpf(m);
    // halved exponents descend; pair them with the ascending integer ones
    std::reverse(h.coefficients.begin(), h.coefficients.end());
    double worst = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double a = f.coefficients()[j].to_double();
      worst = std::max(worst, std::abs(a - h.coefficients[j]) / std::abs(a));
    }
    CHECK_MESSAGE(worst <= kShift, "m=" << m);
  }
}

TEST_CASE("chin arithmetic-exponent formulas") {
  const MpfFormula c2 = chin_mpf(2);
  CHECK(c2.exponents() == std::vector<std::int64_t>{1, 2});
  CHECK(c2.coefficients() == rv({"-1/3", "4/3"}));
  CHECK(c2.a_norm1() == Rational(5, 3));
  CHECK(chin_mpf(1).coefficients() == rv({"1"}));
  for (int m = 6; m < 20; ++m) CHECK(chin_mpf(m + 1).a_norm1() >= chin_mpf(m).a_norm1() * Rational(3, 2));
  for (int m = 6; m <= 20; ++m) CHECK(chin_mpf(m).a_norm1() > rounded_mpf(m).a_norm1());

  const MpfFormula c4 = chin_mpf(3, 4);
  CHECK(c4.exponents() == std::vector<std::int64_t>{1, 2});
  CHECK(c4.coefficients() == rv({"-1/15", "16/15"}));
}

TEST_CASE("condition reports") {
  const ConditionReport r = condition_report(chin_mpf(2));
  CHECK(r.a_norm1 == doctest::Approx(5.0 / 3.0));
  CHECK(r.k_norm1 == 3);
  CHECK(r.product == doctest::Approx(5.0));
  const ConditionReport single = condition_report(rounded_mpf(1));
  CHECK(single.a_norm1 == 1);
  CHECK(single.k_norm1 == 3);

  const TableFixture t4 = load_table(default_fixture_dir() / "table_base4.json");
  for (const auto& nf : tabulated_formulas(t4)) {
    if (nf.id != "b4-min_a1k1-m04") continue;
    const ConditionReport c = condition_report(nf.formula);
    CHECK(c.a_norm1 == doctest::Approx(1.169).epsilon(5e-4));
    CHECK(c.k_norm1 == 7);
  }
  const ConditionReport rc = condition_report(chebyshev_mpf(4));
  CHECK(rc.a_norm1 >= 1);
  CHECK(rc.order == 8);
}

TEST_CASE("formula invariants are enforced and json round-trips") {
  CHECK_THROWS_AS(MpfFormula(2, 4, {2, 1}, rv({"4/3", "-1/3"})), InvalidFormula);
  CHECK_THROWS_AS(MpfFormula(2, 4, {1, 2}, rv({"-1/3", "5/3"})), InvalidFormula);
  CHECK_THROWS_AS(MpfFormula(2, 6, {1, 2}, rv({"-1/3", "4/3"})), InvalidFormula);
  CHECK_THROWS_AS(MpfFormula(3, 6, {1, 2}, rv({"-1/3", "4/3"})), InvalidFormula);

  for (int m = 1; m <= 12; ++m) {
    const MpfFormula f = rounded_mpf(m);
    const MpfFormula back = MpfFormula::from_json(nlohmann::json::parse(f.to_json().dump()));
    CHECK(back.exponents() == f.exponents());
    CHECK(back.coefficients() == f.coefficients());
    CHECK(back.order() == f.order());
  }
  const auto j = chin_mpf(2).to_json();
  CHECK(j["coefficients"][0] == "-1/3");
  CHECK(j["alpha"] == 2);
  CHECK(j["order"] == 4);
  CHECK_THROWS_AS((void)MpfFormula::from_json(nlohmann::json::parse(R"({"alpha":2})")), ParseError);
}
