#include "mpf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "mpf/construct.hpp"
#include "mpf/errors.hpp"
#include "mpf/optimize.hpp"

#ifndef MPF_DATA_DIR
#define MPF_DATA_DIR "data"
#endif

namespace mpf {

// ---- fixtures ---------------------------------------------------------------

TableFixture parse_table(const nlohmann::json& doc) {
  TableFixture f;
  try {
    f.alpha = doc.at("alpha").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fixture header: ") + e.what());
  }
  if (!doc.contains("rows") || !doc["rows"].is_array()) throw ParseError("fixture has no \"rows\" array");
  std::size_t index = 0;
  for (const auto& r : doc["rows"]) {
    try {
      TableRow row;
      row.half = r.at("half").get<std::string>();
      row.m = r.at("m").get<int>();
      row.printed_a_norm1 = r.at("a_norm1").get<std::string>();
      row.printed_k_norm1 = r.at("k_norm1").get<std::int64_t>();
      row.exponents = r.at("exponents").get<std::vector<std::int64_t>>();
      for (const auto& c : r.at("coefficients")) row.coefficients.push_back(Rational::parse(c.get<std::string>()));
      f.rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw ParseError("fixture row " + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return f;
}

TableFixture load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_table(doc);
}

std::vector<NamedFormula> tabulated_formulas(const TableFixture& fixture) {
  std::vector<NamedFormula> out;
  for (const auto& row : fixture.rows) {
    std::ostringstream id;
    id << 'b' << fixture.alpha << '-' << row.half << "-m" << std::setw(2) << std::setfill('0') << row.m;
    out.push_back({id.str(), MpfFormula(fixture.alpha, 2 * row.m, row.exponents, row.coefficients)});
  }
  return out;
}

std::filesystem::path default_fixture_dir() { return MPF_DATA_DIR; }

// ---- table verification -----------------------------------------------------

namespace {

// |exact - printed| <= half a unit in the last printed digit.
bool matches_printed(const Rational& exact, const std::string& printed) {
  const auto dot = printed.find('.');
  const std::size_t decimals = dot == std::string::npos ? 0 : printed.size() - dot - 1;
  std::string digits = printed;
  if (dot != std::string::npos) digits.erase(dot, 1);
  mpz_class scale = 1;
  for (std::size_t i = 0; i < decimals; ++i) scale *= 10;
  const Rational value(mpz_class(digits, 10), scale);
  return abs(exact - value) <= Rational(mpz_class(1), mpz_class(2 * scale));
}

}  // namespace

bool TableReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RowCheck& r) { return r.pass(); });
}

std::size_t TableReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const RowCheck& r) { return !r.pass(); }));
}

nlohmann::json TableReport::to_json() const {
  nlohmann::json rj = nlohmann::json::array();
  for (const auto& r : rows)
    rj.push_back({{"half", r.half},
                  {"m", r.m},
                  {"pass", r.pass()},
                  {"residual_zero", r.residual_zero},
                  {"a_norm1", r.a_norm1},
                  {"k_norm1", r.k_norm1},
                  {"failures", r.failures}});
  return {{"alpha", alpha}, {"rows", rj}, {"pass", pass()}, {"failed_rows", failures()}};
}

TableReport verify_tables(const TableFixture& fixture) {
  TableReport report;
  report.alpha = fixture.alpha;
  for (const auto& row : fixture.rows) {
    RowCheck c;
    c.half = row.half;
    c.m = row.m;
    const std::string where = row.half + " m=" + std::to_string(row.m) + ": ";
    try {
      const std::size_t expected = moment_rows(fixture.alpha, row.m);
      c.shape_ok = row.exponents.size() == expected && row.coefficients.size() == expected;
      if (!c.shape_ok) c.failures.push_back(where + "expected " + std::to_string(expected) + " terms");
    } catch (const std::exception& e) {
      c.failures.push_back(where + e.what());
    }
    if (c.shape_ok) {
      const RationalVector res = formula_residual(fixture.alpha, row.m, row.exponents, row.coefficients);
      c.residual_zero = is_zero_vector(res);
      if (!c.residual_zero) {
        std::size_t first = 0;
        while (res[first].is_zero()) ++first;
        c.failures.push_back(where + "nonzero residual in moment row " + std::to_string(first) + " (" +
                             res[first].to_string() + ")");
      }
    }
    const Rational a1 = norm1(row.coefficients);
    c.a_norm1 = a1.to_double();
    c.a_norm1_matches = matches_printed(a1, row.printed_a_norm1);
    if (!c.a_norm1_matches)
      c.failures.push_back(where + "||a||_1 = " + std::to_string(c.a_norm1) + " does not round to " +
                           row.printed_a_norm1);
    for (auto k : row.exponents) c.k_norm1 += k;
    c.k_norm1_matches = c.k_norm1 == row.printed_k_norm1;
    if (!c.k_norm1_matches)
      c.failures.push_back(where + "||k||_1 = " + std::to_string(c.k_norm1) + " but printed " +
                           std::to_string(row.printed_k_norm1));
    report.rows.push_back(std::move(c));
  }
  return report;
}

TableReport verify_tables(const std::filesystem::path& fixture_path) { return verify_tables(load_table(fixture_path)); }

// ---- step search ------------------------------------------------------------

MinStepsResult min_steps_for(const std::function<double(std::int64_t)>& error, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  std::map<std::int64_t, double> seen;
  auto err = [&](std::int64_t r) {
    auto it = seen.find(r);
    if (it != seen.end()) return it->second;
    return seen[r] = error(r);
  };
  auto finish = [&](std::int64_t r) {
    MinStepsResult out;
    out.r = r;
    out.error_at_r = err(r);
    if (r > 1) out.error_at_r_minus_1 = err(r - 1);
    out.evaluations = static_cast<std::int64_t>(seen.size());
    return out;
  };

  if (err(1) <= epsilon) return finish(1);
  std::int64_t hi = 2;
  while (err(hi) > epsilon) {
    if (hi >= kMaxSteps)
      throw Unreachable("error " + std::to_string(err(hi)) + " above target at r=" + std::to_string(hi));
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // err(lo) > epsilon
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (err(mid) <= epsilon) hi = mid;
    else lo = mid;
  }
  // Bisection assumes error decays with r. A rise of more than 1% between
  // evaluated points below r = 64 triggers a linear scan instead.
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [r, e] : seen) {
    if (e > prev * 1.01) monotone = false;
    prev = e;
  }
  if (!monotone && hi <= 64) {
    for (std::int64_t r = 1; r < hi; ++r)
      if (err(r) <= epsilon) return finish(r);
  }
  return finish(hi);
}

MinStepsResult min_steps(const HamiltonianModel& h, const MpfFormula& formula, double t, double epsilon) {
  return min_steps_for([&](std::int64_t r) { return evolution_error(h, formula, t, r); }, epsilon);
}

// ---- benchmark sweep --------------------------------------------------------

namespace {

struct Job {
  double epsilon;
  std::size_t formula;
};

std::vector<Job> make_jobs(const BenchConfig& cfg, const std::vector<NamedFormula>& formulas) {
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end());
  std::vector<std::size_t> order(formulas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return formulas[a].id < formulas[b].id; });
  std::vector<Job> jobs;
  for (double e : eps)
    for (auto f : order) jobs.push_back({e, f});
  return jobs;
}

BenchPoint run_job(const HamiltonianModel& h, const BenchConfig& cfg, const NamedFormula& nf, double epsilon) {
  BenchPoint p;
  p.sites = cfg.sites;
  p.time = cfg.time;
  p.epsilon = epsilon;
  p.formula_id = nf.id;
  p.k_norm1 = nf.formula.k_norm1();
  p.multiplier = oaa_multiplier(nf.formula.a_norm1().to_double());
  try {
    const MinStepsResult s = min_steps(h, nf.formula, cfg.time, epsilon);
    p.reachable = true;
    p.steps_r = s.r;
    p.measured_error = s.error_at_r;
    p.total_cost = p.multiplier * s.r * p.k_norm1;
  } catch (const Unreachable&) {
    p.reachable = false;
  }
  return p;
}

}  // namespace

std::vector<BenchPoint> benchmark_sweep_serial(const HamiltonianModel& h, const BenchConfig& cfg,
                                               const std::vector<NamedFormula>& formulas) {
  std::vector<BenchPoint> out;
  for (const Job& j : make_jobs(cfg, formulas)) out.push_back(run_job(h, cfg, formulas[j.formula], j.epsilon));
  return out;
}

std::vector<BenchPoint> benchmark_sweep(const HamiltonianModel& h, const BenchConfig& cfg,
                                        const std::vector<NamedFormula>& formulas) {
  const std::vector<Job> jobs = make_jobs(cfg, formulas);
  std::vector<BenchPoint> out(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Job& j = jobs[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = run_job(h, cfg, formulas[j.formula], j.epsilon);
  }
  return out;
}

std::vector<BenchPoint> suzuki_sweep(const HamiltonianModel& h, const BenchConfig& cfg, int alpha) {
  std::vector<double> eps = cfg.epsilons;
  std::sort(eps.begin(), eps.end());
  const std::int64_t per_step = suzuki_u2_queries(alpha);
  std::vector<BenchPoint> out(eps.size());
  const auto n = static_cast<std::ptrdiff_t>(eps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    BenchPoint p;
    p.sites = cfg.sites;
    p.time = cfg.time;
    p.epsilon = eps[static_cast<std::size_t>(i)];
    p.formula_id = "suzuki-" + std::to_string(alpha);
    p.k_norm1 = per_step;
    p.multiplier = 1;
    try {
      const MinStepsResult s =
          min_steps_for([&](std::int64_t r) { return product_formula_error(h, alpha, cfg.time, r); }, p.epsilon);
      p.reachable = true;
      p.steps_r = s.r;
      p.measured_error = s.error_at_r;
      p.total_cost = s.r * per_step;
    } catch (const Unreachable&) {
      p.reachable = false;
    }
    out[static_cast<std::size_t>(i)] = std::move(p);
  }
  return out;
}

std::vector<SweepWinner> sweep_winners(const std::vector<BenchPoint>& points) {
  std::map<double, std::vector<const BenchPoint*>> by_eps;
  for (const auto& p : points)
    if (p.reachable) by_eps[p.epsilon].push_back(&p);
    else by_eps.try_emplace(p.epsilon);
  std::vector<SweepWinner> out;
  for (auto& [eps, ps] : by_eps) {
    std::sort(ps.begin(), ps.end(), [](const BenchPoint* a, const BenchPoint* b) {
      return a->total_cost != b->total_cost ? a->total_cost < b->total_cost : a->formula_id < b->formula_id;
    });
    SweepWinner w;
    w.epsilon = eps;
    if (!ps.empty()) w.best = *ps[0];
    if (ps.size() > 1) w.runner_up = *ps[1];
    out.push_back(std::move(w));
  }
  return out;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchPoint>& points) {
  std::map<std::pair<double, std::string>, int> rank;
  for (const auto& w : sweep_winners(points)) {
    if (w.best) rank[{w.epsilon, w.best->formula_id}] = 1;
    if (w.runner_up) rank[{w.epsilon, w.runner_up->formula_id}] = 2;
  }
  os << "sites,time,epsilon,formula,reachable,steps_r,k_norm1,multiplier,total_cost,measured_error,rank\n";
  os << std::setprecision(10);
  for (const auto& p : points) {
    const auto it = rank.find({p.epsilon, p.formula_id});
    os << p.sites << ',' << p.time << ',' << p.epsilon << ',' << p.formula_id << ',' << (p.reachable ? 1 : 0) << ','
       << p.steps_r << ',' << p.k_norm1 << ',' << p.multiplier << ',' << p.total_cost << ',' << p.measured_error << ','
       << (it == rank.end() ? 0 : it->second) << '\n';
  }
}

double fitted_cost_exponent(const std::vector<double>& epsilons, const std::vector<double>& costs) {
  if (epsilons.size() != costs.size() || epsilons.size() < 2) throw std::invalid_argument("need >= 2 paired points");
  const auto n = static_cast<double>(epsilons.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double x = -std::log(epsilons[i]);
    const double y = std::log(costs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- curves ----------------------------------------------------------------

std::vector<Figure1Row> figure1_data(int m_max) {
  if (m_max < 1 || m_max > 64) throw std::invalid_argument("m_max must lie in [1, 64]");
  std::vector<Figure1Row> rows;
  for (int m = 1; m <= m_max; ++m) {
    Figure1Row r;
    r.order = 2 * m;
    r.suzuki_queries = std::pow(5.0, m - 1);
    const MpfFormula chin = chin_mpf(m);
    r.chin_a_norm1 = chin.a_norm1().to_double();
    r.chin_k_norm1 = chin.k_norm1();
    const MpfFormula rounded = rounded_mpf(m);
    r.rounded_a_norm1 = rounded.a_norm1().to_double();
    r.rounded_k_norm1 = rounded.k_norm1();
    rows.push_back(r);
  }
  return rows;
}

void write_figure1_csv(std::ostream& os, const std::vector<Figure1Row>& rows) {
  os << "order,suzuki_queries,chin_a_norm1,chin_k_norm1,rounded_a_norm1,rounded_k_norm1\n";
  os << std::setprecision(12);
  for (const auto& r : rows)
    os << r.order << ',' << r.suzuki_queries << ',' << r.chin_a_norm1 << ',' << r.chin_k_norm1 << ','
       << r.rounded_a_norm1 << ',' << r.rounded_k_norm1 << '\n';
}

}  // namespace mpf
