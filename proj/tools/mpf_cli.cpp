#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mpf/bench.hpp"
#include "mpf/construct.hpp"
#include "mpf/costmodel.hpp"
#include "mpf/errors.hpp"
#include "mpf/optimize.hpp"

using namespace mpf;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json real_formula_json(const RealMpf& f) {
  return {{"order", f.order},
          {"interpolation_points", f.interpolation_points},
          {"exponents", f.real_exponents},
          {"coefficients", f.coefficients},
          {"a_norm1", f.a_norm1()},
          {"k_norm1", f.k_norm1()}};
}

json condition_json(const ConditionReport& c) {
  return {{"order", c.order}, {"a_norm1", c.a_norm1}, {"k_norm1", c.k_norm1}, {"product", c.product}};
}

int half_order(int order) {
  if (order < 2 || order % 2 != 0) throw UsageError("--order must be an even integer >= 2");
  return order / 2;
}

void emit_csv(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  write(out);
}

std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& p) {
  if (std::filesystem::is_directory(p)) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(p))
      if (e.path().extension() == ".json" && e.path().filename().string().starts_with("table_")) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw UsageError("no table_*.json fixtures in " + p.string());
    return out;
  }
  if (!std::filesystem::exists(p)) throw UsageError("no such fixture: " + p.string());
  return {p};
}

// ---- construct ----

struct ConstructArgs {
  int order = 4;
  std::string method = "rounded";
  int base = 2;
  bool halved = false;
};

int run_construct(const ConstructArgs& a) {
  const int m = half_order(a.order);
  json out;
  if (a.method == "chebyshev") {
    if (a.base != 2) throw UsageError("chebyshev formulas use base order 2");
    const RealMpf f = a.halved ? halved_chebyshev_mpf(m) : chebyshev_mpf(m);
    out = real_formula_json(f);
    out["condition"] = condition_json(condition_report(f));
  } else if (a.method == "rounded") {
    if (a.base != 2) throw UsageError("rounded formulas use base order 2");
    const MpfFormula f = rounded_mpf(m);
    out = f.to_json();
    out["condition"] = condition_json(condition_report(f));
  } else {
    if (a.order <= a.base) throw UsageError("--order must exceed --base");
    const MpfFormula f = chin_mpf(m, a.base);
    out = f.to_json();
    out["condition"] = condition_json(condition_report(f));
  }
  out["method"] = a.method + (a.halved ? "-halved" : "");
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---- optimize ----

struct OptimizeArgs {
  int m = 2;
  int alpha = 2;
  std::string objective = "product";
  std::string cap = "2";
  int max_exponent = 0;
  bool exhaustive = false;
};

int run_optimize(const OptimizeArgs& a) {
  if (a.alpha != 2 && a.alpha != 4) throw UsageError("--alpha must be 2 or 4");
  if (a.exhaustive && a.m > kExhaustiveMaxM)
    throw UsageError("--exhaustive is limited to m <= " + std::to_string(kExhaustiveMaxM));
  const int mx = a.max_exponent > 0 ? a.max_exponent : a.m * a.m + 2 * a.m;
  const SearchMode mode = a.exhaustive ? SearchMode::subsets : SearchMode::lp_sweep;
  const LpSolution s = a.objective == "product" ? search_min_product(a.m, a.alpha, mx, mode)
                                                : search_min_k1_capped(a.m, a.alpha, Rational::parse(a.cap), mx, mode);
  std::cout << s.to_json().dump(2) << '\n';
  return kOk;
}

// ---- verify-tables ----

int run_verify(const std::string& fixtures) {
  json out = json::array();
  bool ok = true;
  for (const auto& f : fixture_files(fixtures)) {
    TableReport r;
    try {
      r = verify_tables(f);
    } catch (const ParseError& e) {
      std::cerr << e.what() << '\n';
      out.push_back({{"fixture", f.filename().string()}, {"pass", false}, {"error", e.what()}});
      ok = false;
      continue;
    }
    json j = r.to_json();
    j["fixture"] = f.filename().string();
    out.push_back(j);
    ok = ok && r.pass();
    for (const auto& row : r.rows)
      for (const auto& msg : row.failures) std::cerr << f.filename().string() << ": " << msg << '\n';
  }
  std::cout << out.dump(2) << '\n';
  return ok ? kOk : kVerifyFailed;
}

// ---- cost ----

struct CostArgs {
  double t_lambda = 0;
  double epsilon = 0;
  std::vector<double> t_lambda_list;
  std::vector<double> eps_list;
  std::string formula;
  bool unamplified = false;
  std::string csv;
};

MpfFormula load_formula(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open formula " + path);
  try {
    return MpfFormula::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int run_cost(const CostArgs& a) {
  const std::optional<MpfFormula> fixed =
      a.formula.empty() ? std::nullopt : std::optional<MpfFormula>(load_formula(a.formula));
  auto pick = [&](const SimulationTask& task) {
    return fixed ? *fixed : rounded_mpf(choose_order(task) / 2);
  };

  if (!a.t_lambda_list.empty() || !a.eps_list.empty()) {
    if (a.t_lambda_list.empty() || a.eps_list.empty()) throw UsageError("sweep needs both --t-lambda-list and --eps-list");
    emit_csv(a.csv, [&](std::ostream& os) {
      os << "t_lambda,epsilon,order,r,u2_queries,progmpf_queries\n" << std::setprecision(10);
      for (double tl : a.t_lambda_list)
        for (double e : a.eps_list) {
          const SimulationTask task(tl, e);
          const MpfFormula f = pick(task);
          const CostReport c = total_cost(task, f, !a.unamplified);
          os << tl << ',' << e << ',' << f.order() << ',' << c.steps_r << ',' << c.u2_queries << ','
             << c.progmpf_queries << '\n';
        }
    });
    return kOk;
  }

  const SimulationTask task(a.t_lambda, a.epsilon);
  const MpfFormula f = pick(task);
  json out = total_cost(task, f, !a.unamplified).to_json();
  out["t_lambda"] = a.t_lambda;
  out["epsilon"] = a.epsilon;
  out["formula"] = f.to_json();
  out["amplified"] = !a.unamplified;
  std::cout << out.dump(2) << '\n';
  return kOk;
}

// ---- bench ----

struct BenchArgs {
  int sites = 4;
  double time = -1;
  std::vector<double> eps_list{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  int base = 2;
  std::string csv;
  std::string fixtures;
  int suzuki_order = 0;
  bool allow_large = false;
};

json point_json(const BenchPoint& p) {
  return {{"formula", p.formula_id}, {"steps_r", p.steps_r},       {"k_norm1", p.k_norm1},
          {"multiplier", p.multiplier}, {"total_cost", p.total_cost}, {"measured_error", p.measured_error}};
}

int run_bench(const BenchArgs& a) {
  const int max_sites = a.allow_large ? 10 : 8;
  if (a.sites < 2 || a.sites > max_sites)
    throw UsageError("--sites must lie in [2, " + std::to_string(max_sites) + "]" +
                     (a.allow_large ? "" : "; pass --allow-large for 9 or 10"));
  if (a.base != 2 && a.base != 4) throw UsageError("--base must be 2 or 4");
  const std::filesystem::path dir = a.fixtures.empty() ? default_fixture_dir() : std::filesystem::path(a.fixtures);
  const std::filesystem::path table = dir / (a.base == 2 ? "table_base2.json" : "table_base4.json");
  const BenchConfig cfg{a.sites, a.time > 0 ? a.time : static_cast<double>(a.sites), a.eps_list, a.base};

  const HamiltonianModel h = heisenberg_chain(a.sites);
  const auto points = benchmark_sweep(h, cfg, tabulated_formulas(load_table(table)));
  std::vector<BenchPoint> all = points;
  json out{{"sites", cfg.sites}, {"time", cfg.time}, {"base_order", cfg.base_order}, {"lambda", h.lambda()}};

  json winners = json::array();
  std::vector<double> eps, cost;
  for (const auto& w : sweep_winners(points)) {
    json j{{"epsilon", w.epsilon}};
    j["best"] = w.best ? point_json(*w.best) : json(nullptr);
    j["runner_up"] = w.runner_up ? point_json(*w.runner_up) : json(nullptr);
    if (w.best) {
      eps.push_back(w.epsilon);
      cost.push_back(static_cast<double>(w.best->total_cost));
    }
    winners.push_back(j);
  }
  out["winners"] = winners;
  if (eps.size() >= 2) out["winner_cost_exponent"] = fitted_cost_exponent(eps, cost);

  if (a.suzuki_order > 0) {
    const auto sz = suzuki_sweep(h, cfg, a.suzuki_order);
    json sj = json::array();
    std::vector<double> se, sc;
    for (const auto& p : sz) {
      sj.push_back({{"epsilon", p.epsilon}, {"reachable", p.reachable}, {"steps_r", p.steps_r}, {"total_cost", p.total_cost}});
      if (p.reachable) {
        se.push_back(p.epsilon);
        sc.push_back(static_cast<double>(p.total_cost));
      }
    }
    out["suzuki"] = {{"order", a.suzuki_order}, {"points", sj}};
    if (se.size() >= 2) out["suzuki"]["cost_exponent"] = fitted_cost_exponent(se, sc);
    all.insert(all.end(), sz.begin(), sz.end());
  }

  if (!a.csv.empty()) emit_csv(a.csv, [&](std::ostream& os) { write_bench_csv(os, all); });
  if (a.csv != "-") std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiproduct formula construction, optimization and benchmarking"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a formula of the given order");
  construct->add_option("--order", ca.order, "Order 2m")->required();
  construct->add_option("--method", ca.method)->check(CLI::IsMember({"chebyshev", "rounded", "chin"}));
  construct->add_option("--base", ca.base, "Base product formula order")->check(CLI::IsMember({2, 4}));
  construct->add_flag("--halved", ca.halved, "First m of the 2m Chebyshev nodes");

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "Exact LP search over integer exponents");
  optimize->add_option("--m", oa.m)->required()->check(CLI::Range(1, 40));
  optimize->add_option("--alpha", oa.alpha)->check(CLI::IsMember({2, 4}));
  optimize->add_option("--objective", oa.objective)->check(CLI::IsMember({"product", "k1cap"}));
  optimize->add_option("--cap", oa.cap, "Bound on ||a||_1 for k1cap (rational)");
  optimize->add_option("--max-exponent", oa.max_exponent, "Largest candidate exponent (default m^2 + 2m)");
  optimize->add_flag("--exhaustive", oa.exhaustive, "Enumerate every support (m <= 6)");

  std::string fixtures = default_fixture_dir().string();
  auto* verify = app.add_subcommand("verify-tables", "Check tabulated formulas exactly");
  verify->add_option("--fixtures", fixtures, "Fixture file or directory");

  CostArgs co;
  auto* cost = app.add_subcommand("cost", "Query cost for a simulation task");
  cost->add_option("--t-lambda", co.t_lambda);
  cost->add_option("--epsilon", co.epsilon);
  cost->add_option("--t-lambda-list", co.t_lambda_list)->delimiter(',');
  cost->add_option("--eps-list", co.eps_list)->delimiter(',');
  cost->add_option("--formula", co.formula, "Formula JSON; default picks the order and a rounded formula");
  cost->add_flag("--no-amplification", co.unamplified);
  cost->add_option("--csv", co.csv, "Sweep CSV path (default stdout)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Heisenberg chain cost sweep over tabulated formulas");
  bench->add_option("--sites", ba.sites);
  bench->add_option("--time", ba.time, "Evolution time (default: number of sites)");
  bench->add_option("--eps-list", ba.eps_list)->delimiter(',');
  bench->add_option("--base", ba.base);
  bench->add_option("--csv", ba.csv, "Write per-point CSV ('-' for stdout)");
  bench->add_option("--fixtures", ba.fixtures, "Directory holding table_base{2,4}.json");
  bench->add_option("--suzuki-order", ba.suzuki_order, "Also sweep a plain Suzuki formula")->check(CLI::IsMember({2, 4, 6}));
  bench->add_flag("--allow-large", ba.allow_large, "Permit 9 or 10 sites");

  int max_m = 20;
  std::string fig_csv;
  auto* fig1 = app.add_subcommand("fig1", "Query count and condition number against order");
  fig1->add_option("--max-m", max_m)->check(CLI::Range(1, 64));
  fig1->add_option("--csv", fig_csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*construct) return run_construct(ca);
    if (*optimize) return run_optimize(oa);
    if (*verify) return run_verify(fixtures);
    if (*cost) {
      if (co.t_lambda_list.empty() && co.eps_list.empty() && (cost->count("--t-lambda") == 0 || cost->count("--epsilon") == 0))
        throw UsageError("cost needs --t-lambda and --epsilon, or the sweep lists");
      return run_cost(co);
    }
    if (*bench) return run_bench(ba);
    if (*fig1) {
      emit_csv(fig_csv, [&](std::ostream& os) { write_figure1_csv(os, figure1_data(max_m)); });
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
