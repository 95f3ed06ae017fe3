#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpf/formula.hpp"
#include "mpf/sim.hpp"

namespace mpf {

// ---- fixtures ---------------------------------------------------------------

struct TableRow {
  std::string half;  // "min_a1k1" or "min_k1_capped"
  int m = 0;
  std::string printed_a_norm1;
  std::int64_t printed_k_norm1 = 0;
  std::vector<std::int64_t> exponents;
  RationalVector coefficients;
};

struct TableFixture {
  int alpha = 2;
  std::vector<TableRow> rows;
};

/// Throws ParseError naming the offending row.
[[nodiscard]] TableFixture parse_table(const nlohmann::json& doc);
[[nodiscard]] TableFixture load_table(const std::filesystem::path& path);

struct NamedFormula {
  std::string id;
  MpfFormula formula;
};

/// Every fixture row as a validated formula, id "b<alpha>-<half>-m<NN>".
[[nodiscard]] std::vector<NamedFormula> tabulated_formulas(const TableFixture& fixture);

/// data/ directory shipped with the sources.
[[nodiscard]] std::filesystem::path default_fixture_dir();

// ---- table verification -----------------------------------------------------

struct RowCheck {
  std::string half;
  int m = 0;
  bool shape_ok = false;
  bool residual_zero = false;
  bool a_norm1_matches = false;
  bool k_norm1_matches = false;
  double a_norm1 = 0;
  std::int64_t k_norm1 = 0;
  std::vector<std::string> failures;

  [[nodiscard]] bool pass() const { return failures.empty(); }
};

struct TableReport {
  int alpha = 2;
  std::vector<RowCheck> rows;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] std::size_t failures() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Exact residual, printed ||a||_1 to its shown digits, printed ||k||_1.
[[nodiscard]] TableReport verify_tables(const TableFixture& fixture);
[[nodiscard]] TableReport verify_tables(const std::filesystem::path& fixture_path);

// ---- step search ------------------------------------------------------------

inline constexpr std::int64_t kMaxSteps = std::int64_t{1} << 16;

struct MinStepsResult {
  std::int64_t r = 0;
  double error_at_r = 0;
  std::optional<double> error_at_r_minus_1;  // absent for r = 1
  std::int64_t evaluations = 0;
};

/// Smallest r with error(r) <= epsilon, by doubling then bisection. If the
/// evaluated errors are visibly non-monotone and r <= 64, a linear scan
/// replaces the bisection result. Throws Unreachable beyond kMaxSteps.
[[nodiscard]] MinStepsResult min_steps_for(const std::function<double(std::int64_t)>& error, double epsilon);

[[nodiscard]] MinStepsResult min_steps(const HamiltonianModel& h, const MpfFormula& formula, double t,
                                       double epsilon);

// ---- benchmark sweep --------------------------------------------------------

struct BenchPoint {
  int sites = 0;
  double time = 0;
  double epsilon = 0;
  std::string formula_id;
  bool reachable = false;
  std::int64_t steps_r = 0;
  std::int64_t k_norm1 = 0;
  int multiplier = 3;        // n_OAA for formulas, 1 for product formulas
  std::int64_t total_cost = 0;  // multiplier * r * ||k||_1
  double measured_error = 0;
};

struct BenchConfig {
  int sites = 4;
  double time = 4;
  std::vector<double> epsilons;
  int base_order = 2;
};

/// One point per (epsilon, formula), sorted by (epsilon, formula id). Points
/// are independent jobs; the parallel result is identical to the serial one.
[[nodiscard]] std::vector<BenchPoint> benchmark_sweep(const HamiltonianModel& h, const BenchConfig& cfg,
                                                      const std::vector<NamedFormula>& formulas);
[[nodiscard]] std::vector<BenchPoint> benchmark_sweep_serial(const HamiltonianModel& h, const BenchConfig& cfg,
                                                             const std::vector<NamedFormula>& formulas);

/// Plain Suzuki product formula of the given order; cost r 5^{alpha/2-1}.
[[nodiscard]] std::vector<BenchPoint> suzuki_sweep(const HamiltonianModel& h, const BenchConfig& cfg, int alpha);

struct SweepWinner {
  double epsilon = 0;
  std::optional<BenchPoint> best;
  std::optional<BenchPoint> runner_up;
};

/// Cheapest and second-cheapest reachable point per epsilon (ties by id).
[[nodiscard]] std::vector<SweepWinner> sweep_winners(const std::vector<BenchPoint>& points);

void write_bench_csv(std::ostream& os, const std::vector<BenchPoint>& points);

/// Least-squares slope of log(cost) against log(1/epsilon).
[[nodiscard]] double fitted_cost_exponent(const std::vector<double>& epsilons, const std::vector<double>& costs);

// ---- curves ----------------------------------------------------------------

struct Figure1Row {
  int order = 0;
  double suzuki_queries = 0;  // 5^{m-1}
  double chin_a_norm1 = 0;
  std::int64_t chin_k_norm1 = 0;
  double rounded_a_norm1 = 0;
  std::int64_t rounded_k_norm1 = 0;
};

[[nodiscard]] std::vector<Figure1Row> figure1_data(int m_max);
void write_figure1_csv(std::ostream& os, const std::vector<Figure1Row>& rows);

}  // namespace mpf
