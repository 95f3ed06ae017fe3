#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "mpf/bench.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MPF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Run r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args) {
  const Run r = run(args);
  REQUIRE(r.code == 0);
  return nlohmann::json::parse(r.out);
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mpf_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("construct") {
  const auto r = run_json("construct --order 4 --method rounded");
  CHECK(r["exponents"] == nlohmann::json::array({4, 10}));
  CHECK(r["coefficients"] == nlohmann::json::array({"-4/21", "25/21"}));
  CHECK(r["order"] == 4);

  const auto c = run_json("construct --order 6 --method chin --base 4");
  CHECK(c["coefficients"] == nlohmann::json::array({"-1/15", "16/15"}));
  CHECK(c["alpha"] == 4);

  const auto h = run_json("construct --order 4 --method chebyshev --halved");
  CHECK(h["coefficients"][0].get<double>() == doctest::Approx(1.14065228383603));

  CHECK(run("construct --order 5 --method rounded").code == 1);
  CHECK(run("construct --order 4 --method nope").code == 1);
  CHECK(run("construct --order 4 --method rounded --base 4").code == 1);
}

TEST_CASE("optimize") {
  const auto p = run_json("optimize --m 3 --alpha 2 --objective product");
  CHECK(p["exponents"] == nlohmann::json::array({1, 2, 6}));
  CHECK(p["coefficients"] == nlohmann::json::array({"1/105", "-1/6", "81/70"}));
  CHECK(p["exhaustive"] == false);
  CHECK(p["objective"] == "min_a1k1");
  CHECK(p["k_norm1"] == 9);
  CHECK(p.contains("a_norm1"));

  const auto q = run_json("optimize --m 5 --alpha 4 --objective k1cap --cap 2");
  CHECK(q["exponents"] == nlohmann::json::array({1, 2, 3, 5}));
  CHECK(q["objective"] == "min_k1_capped");

  const auto e = run_json("optimize --m 5 --objective product --max-exponent 22 --exhaustive");
  CHECK(e["exponents"] == nlohmann::json::array({1, 2, 3, 4, 17}));
  CHECK(e["exhaustive"] == true);

  CHECK(run("optimize --alpha 2").code == 1);
  CHECK(run("optimize --m 3 --alpha 3").code == 1);
  CHECK(run("optimize --m 9 --exhaustive").code == 1);
}

TEST_CASE("verify-tables") {
  const Run ok = run("verify-tables --fixtures " + mpf::default_fixture_dir().string());
  REQUIRE(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["rows"].size() == 27);
  CHECK(j[1]["rows"].size() == 25);

  std::ifstream in(mpf::default_fixture_dir() / "table_base2.json");
  auto doc = nlohmann::json::parse(in);
  doc["rows"][2]["coefficients"][0] = "-1/105";
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << doc.dump();
  CHECK(run("verify-tables --fixtures " + bad.string()).code == 2);
  std::ofstream(bad) << "{not json";
  CHECK(run("verify-tables --fixtures " + bad.string()).code == 2);
  std::filesystem::remove(bad);
  CHECK(run("verify-tables --fixtures /nonexistent/x.json").code == 1);
}

TEST_CASE("cost") {
  const auto c = run_json("cost --t-lambda 10 --epsilon 1e-6");
  CHECK(c["oaa_multiplier"] == 3);
  CHECK(c["u2_queries"].get<long>() == 3 * c["steps_r"].get<long>() * 64);

  const auto f = scratch("f.json");
  std::ofstream(f) << R"({"alpha":2,"order":4,"exponents":[1,2],"coefficients":["-1/3","4/3"]})";
  const auto r = run_json("cost --t-lambda 1 --epsilon 1 --formula " + f.string() + " --no-amplification");
  CHECK(r["u2_queries"].get<long>() == 3 * r["steps_r"].get<long>());
  CHECK(r["oaa_multiplier"] == 1);
  std::ofstream(f) << R"({"alpha":2,"order":4,"exponents":[1,2],"coefficients":["-1/3","5/3"]})";
  CHECK(run("cost --t-lambda 1 --epsilon 0.1 --formula " + f.string()).code == 1);
  std::filesystem::remove(f);

  const Run sweep = run("cost --t-lambda-list 1,10,100 --eps-list 1e-3,1e-9");
  REQUIRE(sweep.code == 0);
  std::istringstream lines(sweep.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t_lambda,epsilon,order,r,u2_queries,progmpf_queries");
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 6);

  CHECK(run("cost --t-lambda 1").code == 1);
  CHECK(run("cost --t-lambda 1 --epsilon 2").code == 1);
}

TEST_CASE("bench and fig1") {
  const auto csv = scratch("bench.csv");
  const auto b = run_json("bench --sites 3 --time 1 --eps-list 1e-3,1e-5 --base 2 --csv " + csv.string());
  CHECK(b["winners"].size() == 2);
  CHECK(b["time"] == 1.0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.starts_with("sites,time,epsilon,formula"));
  std::filesystem::remove(csv);

  CHECK(run("bench --sites 10").code == 1);
  CHECK(run("bench --sites 3 --base 3").code == 1);

  const Run fig = run("fig1 --max-m 4");
  REQUIRE(fig.code == 0);
  CHECK(fig.out.starts_with("order,suzuki_queries"));
  CHECK(std::count(fig.out.begin(), fig.out.end(), '\n') == 5);
  CHECK(run("fig1 --max-m 65").code == 1);
  CHECK(run("").code == 1);
  CHECK(run("--help").code == 0);
}
