#include "mpf/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mpf/optimize.hpp"

namespace mpf {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// ceil() that does not step over an integer because of a last-bit error.
std::int64_t stable_ceil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

SimulationTask::SimulationTask(double t_lambda_, double epsilon_) : t_lambda(t_lambda_), epsilon(epsilon_) {
  if (!(t_lambda >= 0)) throw std::invalid_argument("t_lambda must be nonnegative");
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must lie in (0, 1]");
}

nlohmann::json CostReport::to_json() const {
  return {{"order_m", order_m},
          {"steps_r", steps_r},
          {"oaa_multiplier", oaa_multiplier},
          {"u2_queries", u2_queries},
          {"extra_gates", extra_gates},
          {"success_probability_floor", success_probability_floor},
          {"progmpf_queries", progmpf_queries},
          {"error_inflation_constant", error_inflation_constant}};
}

double single_step_error_bound(double delta_lambda, int m, double a_norm1) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const double x = std::abs(delta_lambda);
  if (x == 0) return 0;
  const int p = 2 * m + 1;
  return 2.0 * a_norm1 * std::exp(p * std::log(x) + x - log_factorial(p));
}

double accumulated_error_bound(double t_lambda, std::int64_t r, int m, double a_norm1) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  const double e = single_step_error_bound(t_lambda / static_cast<double>(r), m, a_norm1);
  return e * static_cast<double>(r) * std::exp(static_cast<double>(r - 1) * std::log1p(e));
}

std::int64_t step_count(const SimulationTask& task, int m, double a_norm1) {
  if (!(task.t_lambda > 0)) throw std::invalid_argument("step_count needs t_lambda > 0");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  const double log_branch =
      (std::log(8.0 * task.t_lambda * a_norm1 / task.epsilon) - log_factorial(2 * m + 1)) / (2.0 * m);
  const double branch = std::max(std::exp(log_branch), 1.0 / std::log(2.0));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(task.t_lambda * branch)));
}

double lambert_w(double x) {
  if (!(x >= 0)) throw std::invalid_argument("lambert_w defined here for x >= 0");
  if (x == 0) return 0;
  double z = std::log1p(x);
  for (int it = 0; it < 100; ++it) {
    const double ez = std::exp(z);
    const double f = z * ez - x;
    const double step = f / (ez * (z + 1.0));
    z -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z)) && std::abs(z * std::exp(z) - x) <= 1e-12 * std::max(1.0, x))
      break;
  }
  return z;
}

int choose_order(const SimulationTask& task) {
  if (!(task.t_lambda / task.epsilon > 1)) throw std::invalid_argument("choose_order needs t_lambda / epsilon > 1");
  const double z = lambert_w(std::log(task.t_lambda / task.epsilon));
  auto order = stable_ceil(std::exp(z));
  if (order % 2 != 0) ++order;
  return static_cast<int>(std::max<std::int64_t>(2, order));
}

CostReport cost_for_steps(std::int64_t r, const MpfFormula& formula, bool amplified, double epsilon) {
  if (r < 0) throw std::invalid_argument("step count must be nonnegative");
  CostReport c;
  c.order_m = formula.m();
  c.steps_r = r;
  const double a1 = formula.a_norm1().to_double();
  c.oaa_multiplier = amplified ? oaa_multiplier(a1) : 1;
  c.u2_queries = r * formula.k_norm1() * c.oaa_multiplier;
  c.extra_gates = r * c.oaa_multiplier * static_cast<std::int64_t>(formula.size());
  c.progmpf_queries = r * formula.k_max() * c.oaa_multiplier;
  if (amplified) c.success_probability_floor = r == 0 ? 1.0 : std::max(0.0, 1.0 - epsilon);
  else c.success_probability_floor = std::pow(a1, -2.0 * static_cast<double>(r));
  return c;
}

CostReport total_cost(const SimulationTask& task, const MpfFormula& formula, bool amplified) {
  const std::int64_t r = task.t_lambda > 0 ? step_count(task, formula.m(), formula.a_norm1().to_double()) : 0;
  return cost_for_steps(r, formula, amplified, task.epsilon);
}

ProgrammableCost progmpf_cost(const MpfFormula& formula, std::int64_t n_terms, std::int64_t m_terms, double delta,
                              double epsilon) {
  if (n_terms <= 0 || m_terms <= 0 || !(delta > 0) || !(epsilon > 0))
    throw std::invalid_argument("programmable cost inputs must be positive");
  ProgrammableCost p;
  p.queries_per_step = formula.k_max();
  p.precision = stable_ceil(static_cast<double>(n_terms) * static_cast<double>(m_terms) * delta / epsilon);
  return p;
}

}  // namespace mpf
