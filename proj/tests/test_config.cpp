#include <string>

#include "config.hpp"
#include "doctest.h"
#include "experiments.hpp"

using namespace gg;

namespace {

const char* kThreeGrids = R"({
  "dim": 2,
  "field": {"minpoly": ["-2", "0", "1"], "root_interval": ["1", "2"]},
  "grids": [
    {"c": "1", "w": ["0", "0"]},
    {"c": "1", "w": ["0", ["0", "1"]]},
    {"c": "1", "w": ["0", "0"], "M": [["1", ["0", "1"]], ["1", ["1", "1"]]]}
  ]
})";

const char* kZ2 = R"({"dim": 2, "grids": [{"c": "1", "w": ["0", "0"]}]})";

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config") {
  auto c = parse_config_text(kZ2);
  CHECK(c.presentation.N() == 1);
  CHECK(c.presentation.r(0) == 1);
  CHECK(c.presentation.field->degree() == 1);
  CHECK(!c.run.seed);
}

TEST_CASE("config errors carry line numbers") {
  std::string bad_rational = "{\n  \"dim\": 2,\n  \"grids\": [\n    {\"c\": \"1/0\"}\n  ]\n}";
  std::string e = error_of(bad_rational);
  CHECK(e.find("cfg:4:") == 0);
  CHECK(e.find("/grids/0/c") != std::string::npos);

  std::string unknown = "{\n  \"dim\": 2,\n  \"grids\": [{\"c\": \"1\"}],\n  \"run\": {\n    \"sead\": 3\n  }\n}";
  e = error_of(unknown);
  CHECK(e.find("cfg:5:") == 0);
  CHECK(e.find("unknown key \"sead\"") != std::string::npos);

  std::string syntax = "{\n  \"dim\": 2,\n  \"grids\": [\n    {\"c\": \"1\"},,\n  ]\n}";
  e = error_of(syntax);
  CHECK(e.find("cfg:4:") == 0);

  CHECK(error_of(R"({"dim": 4, "grids": [{}]})").find("/dim") != std::string::npos);
  CHECK(error_of(R"({"dim": 2})").find("exactly one of") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "grids": [{"M": [["2", "0"], ["0", "1"]]}]})") != "");
  CHECK(error_of(R"({"dim": 2, "grids": [{}], "run": {"shift": 1.5}})").find("/run/shift") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "grids": [{}], "run": {"xi": "1:0.5:log"}})").find("/run/xi") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "grids": [{}], "schema": 9})").find("schema") != std::string::npos);
}

TEST_CASE("run settings") {
  auto c = parse_config_text(R"({"dim": 2, "grids": [{}],
    "run": {"seed": 11, "workers": 2, "samples": 1e5, "rho": [0.02, 0.01], "xi": "0.5:8:lin",
            "mode": "mark", "psi": [0, 0], "shift": 0.3, "region": [[0, 1], [2, 3]], "merged": true}})");
  const auto& r = c.run;
  CHECK(*r.seed == 11);
  CHECK(*r.workers == 2);
  CHECK(*r.samples == 1e5);
  CHECK(r.rho.size() == 2);
  CHECK(!r.xi->log);
  CHECK(r.xi->points().size() == 33);
  CHECK(*r.shift == doctest::Approx(0.3));
  CHECK((*r.region)[1].second == 3);
  auto over = parse_run_text(R"({"seed": 12, "rho": 0.05})");
  auto m = merge_run(r, over);
  CHECK(*m.seed == 12);
  CHECK(m.rho.size() == 1);
  CHECK(*m.workers == 2);
  CHECK(parse_run_text("").seed == std::nullopt);
}

TEST_CASE("xi grid specs") {
  auto g = parse_xi_grid("0.25:64:log");
  auto pts = g.points();
  CHECK(pts.size() == 40);
  CHECK(pts.front() == doctest::Approx(0.25));
  CHECK(pts.back() == doctest::Approx(64));
  CHECK(parse_xi_grid("1:2:5:lin").points().size() == 5);
  CHECK_THROWS_AS(parse_xi_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_xi_grid("a:2:log"), ConfigError);
  CHECK_THROWS_AS(parse_xi_grid("1:2:cubic"), ConfigError);
}

TEST_CASE("presentation round trip and analyze") {
  auto c = parse_config_text(kThreeGrids);
  auto a = run_analyze(c.presentation, c.run);
  CHECK(a.report["schema"] == kSchemaVersion);
  CHECK(a.report["N"] == 2);
  CHECK(a.report["r"] == nlohmann::ordered_json::array({2, 1}));
  CHECK(a.report["admissible"] == true);
  std::string once = a.report["presentation"].dump();
  auto c2 = parse_config_text(once);
  std::string twice = presentation_to_json(c2.presentation).dump();
  CHECK(once == twice);
  CHECK(run_analyze(c2.presentation, c2.run).report.dump() == a.report.dump());
  for (const auto& cls : a.report["classes"])
    for (const auto& m : cls["members"]) CHECK(m["weight"].get<double>() == doctest::Approx(1.0 / 3));
}

TEST_CASE("analyze reports failing marks and the rewritten presentation") {
  auto c = parse_config_text(R"({"dim": 2, "grids": [{"c": "1"}, {"c": "2", "w": ["1/4", "0"]}]})");
  auto a = run_analyze(c.presentation, c.run);
  CHECK(a.report["admissible"] == false);
  CHECK(!a.report["failing_marks"].empty());
  REQUIRE(!a.report["admissible_presentation"].is_null());
  auto c2 = parse_config_text(a.report["admissible_presentation"].dump());
  CHECK(run_analyze(c2.presentation, c2.run).report["admissible"] == true);
}

TEST_CASE("experiment outputs are deterministic and stamped") {
  auto c = parse_config_text(kThreeGrids);
  RunSettings r;
  r.seed = 5;
  r.samples = 2000;
  r.workers = 1;
  auto t1 = run_limit_tail(c.presentation, r);
  r.workers = 4;
  auto t4 = run_limit_tail(c.presentation, r);
  CHECK(t1.csv == t4.csv);
  CHECK(t1.csv.rfind("# gridgas-schema 1\nxi,F_raw,F_iso,stderr,n\n", 0) == 0);
  r.rho = {0.05};
  auto s1 = run_simulate(c.presentation, r);
  auto s2 = run_simulate(c.presentation, r);
  CHECK(s1.csv == s2.csv);
  CHECK(s1.report["schema"] == kSchemaVersion);
  r.events = 20;
  r.trajectories = 6;
  auto f1 = run_flight(c.presentation, r);
  r.workers = 1;
  auto f2 = run_flight(c.presentation, r);
  CHECK(f1.csv == f2.csv);
  r.merged = true;
  auto f3 = run_flight(c.presentation, r);
  CHECK(f3.report["merged"] == true);
  r.psi = Mark{5, 0};
  CHECK_THROWS_AS(run_siegel_check(c.presentation, r), ConfigError);
}

TEST_CASE("compare on Z^2 at rho = 0.02") {
  auto c = parse_config_text(kZ2);
  RunSettings r;
  r.seed = 3;
  r.samples = 20000;
  r.rho = {0.02};
  auto a = run_compare(c.presentation, r);
  CHECK(a.pass);
  CHECK(a.report["rows"].size() == 4);
}
