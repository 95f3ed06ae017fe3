#pragma once

#include <cstdint>

#include <json.hpp>

#include "mpf/formula.hpp"

namespace mpf {

/// Simulate for time t with error epsilon; t_lambda = t * sum_j ||h_j||.
struct SimulationTask {
  double t_lambda = 0;
  double epsilon = 1;

  SimulationTask(double t_lambda, double epsilon);
};

struct CostReport {
  int order_m = 0;
  std::int64_t steps_r = 0;
  int oaa_multiplier = 1;
  std::int64_t u2_queries = 0;       // r ||k||_1 n
  std::int64_t extra_gates = 0;      // r n (support size)
  double success_probability_floor = 1;
  std::int64_t progmpf_queries = 0;  // r max_j k_j n
  int error_inflation_constant = 1;  // robust amplification error growth, not folded into epsilon

  [[nodiscard]] nlohmann::json to_json() const;
};

/// 2 ||a||_1 |dl|^{2m+1} e^{|dl|} / (2m+1)!
[[nodiscard]] double single_step_error_bound(double delta_lambda, int m, double a_norm1);

/// eps_{t/r} r (1 + eps_{t/r})^{r-1}, the bound after r steps.
[[nodiscard]] double accumulated_error_bound(double t_lambda, std::int64_t r, int m, double a_norm1);

/// r = ceil(t_lambda max{(8 t_lambda ||a||_1 / (eps (2m+1)!))^{1/(2m)}, 1/log 2}).
[[nodiscard]] std::int64_t step_count(const SimulationTask& task, int m, double a_norm1);

/// Principal branch of z e^z = x for x >= 0.
[[nodiscard]] double lambert_w(double x);

/// Order 2m = max(2, smallest even integer >= e^{W(log(t_lambda / epsilon))}).
[[nodiscard]] int choose_order(const SimulationTask& task);

/// Cost of r given steps of the formula. Unamplified steps compound their
/// success probability ||a||^{-2} per step; amplified runs report 1 - epsilon.
[[nodiscard]] CostReport cost_for_steps(std::int64_t r, const MpfFormula& formula, bool amplified,
                                        double epsilon = 0.0);

/// step_count for the task, then cost_for_steps.
[[nodiscard]] CostReport total_cost(const SimulationTask& task, const MpfFormula& formula, bool amplified);

struct ProgrammableCost {
  std::int64_t queries_per_step = 0;
  std::int64_t precision = 0;  // P = ceil(N M Delta / epsilon)
};

/// Programmable-product-formula query model: max_j k_j queries per step.
[[nodiscard]] ProgrammableCost progmpf_cost(const MpfFormula& formula, std::int64_t n_terms, std::int64_t m_terms,
                                            double delta, double epsilon);

}  // namespace mpf
