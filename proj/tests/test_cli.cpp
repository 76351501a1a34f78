#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hapris/commands.hpp"
#include "hapris/errors.hpp"
#include "json.hpp"

using namespace hapris;
using namespace hapris::cli;
namespace fs = std::filesystem;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text, "case.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "hapris_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(HAPRIS_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_path(const std::string& name) { return std::string(HAPRIS_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("config defaults and overrides") {
  const auto def = default_config();
  CHECK(def.num_elements == std::vector<int>{0, 50, 100});
  CHECK(def.system.deployment.mu_ris == 50e-6);

  const auto cfg = parse_config(R"({
    "deployment": {"mu_ris": 1e-4, "h_ris": 30},
    "buildings": {"lambda_b": 1e-4, "length_law": {"law": "uniform", "spread": 0.5}},
    "fading": {"direct": {"kappa": 1.5, "mu": 2}},
    "num_elements": [100],
    "sweep": {"parameter": "mu_ris", "grid": [1e-5, 2e-5]},
    "monte_carlo": {"trials": 500, "seed": 9, "visibility": "explicit"},
    "mode": "analytic",
    "output": {"format": "json"}
  })");
  CHECK(cfg.system.deployment.mu_ris == 1e-4);
  CHECK(cfg.system.deployment.h_ris == 30.0);
  CHECK(cfg.system.blockage().upsilon == doctest::Approx(2.0 * 1e-4 * 50.0 / 3.141592653589793));
  CHECK(cfg.system.buildings.length_law.law == geometry::SizeLaw::uniform);
  CHECK(cfg.system.direct.kappa() == 1.5);
  CHECK(cfg.num_elements == std::vector<int>{100});
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->grid.size() == 2);
  CHECK(cfg.mc.num_trials == 500);
  CHECK(cfg.mc.visibility == geometry::Visibility::explicit_scene);
  CHECK(cfg.mode == Mode::analytic);
  CHECK(cfg.format == OutputFormat::json);

  const auto ranged = parse_config(R"({"sweep": {"parameter": "rho0_db", "start": 100, "stop": 110, "step": 2.5}})");
  CHECK(ranged.sweep->grid == std::vector<double>{100.0, 102.5, 105.0, 107.5, 110.0});
}

TEST_CASE("shipped configs parse") {
  for (const auto* name : {"defaults.json", "coverage.json", "capacity.json", "ris_intensity.json",
                           "ris_height.json", "blocked_direct.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(config_path(name)));
  }
  CHECK(config_hash(load_config(config_path("defaults.json"))) == config_hash(default_config()));
}

TEST_CASE("config errors name the line and field") {
  const std::string unknown = error_of("{\n  \"deployment\": {\n    \"mu_riss\": 1\n  }\n}");
  CHECK(unknown.find("case.json:3") != std::string::npos);
  CHECK(unknown.find("/deployment/mu_riss") != std::string::npos);

  const std::string bad_type = error_of("{\n\"monte_carlo\": {\"trials\": \"many\"}}");
  CHECK(bad_type.find("case.json:2") != std::string::npos);
  CHECK(bad_type.find("/monte_carlo/trials") != std::string::npos);

  const std::string syntax = error_of("{\n  \"mode\": \"mc\",,\n}");
  CHECK(syntax.find("case.json:2:") != std::string::npos);
  CHECK(syntax.find("syntax") != std::string::npos);

  CHECK(error_of(R"({"sweep": {"parameter": "mu_ris", "grid": []}})").find("/sweep/grid") != std::string::npos);
  CHECK(error_of(R"({"sweep": {"parameter": "mu_ris", "grid": [2e-5, 1e-5]}})").find("/sweep/grid") != std::string::npos);
  CHECK_FALSE(error_of(R"({"sweep": {"parameter": "warp", "grid": [1]}})").empty());
  CHECK_FALSE(error_of(R"({"deployment": {"mu_ris": -1}})").empty());
  CHECK_FALSE(error_of(R"({"mode": "sometimes"})").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/hapris.json"), ConfigError);
}

TEST_CASE("config hash tracks result-affecting fields only") {
  auto a = default_config();
  auto b = default_config();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.out_path = "elsewhere.csv";
  b.mc.threads = 7;
  CHECK(config_hash(a) == config_hash(b));
  b.mc.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("table writers") {
  Table t;
  t.schema = "hapris.test/1";
  t.columns = {"L", "x", "note"};
  t.add_row({std::int64_t{50}, 0.1, std::string("a")});
  t.add_row({std::int64_t{100}, Cell(), std::string("b")});
  CHECK_THROWS(t.add_row({std::int64_t{1}}));
  const Provenance prov{"0123456789abcdef", 7};

  std::ostringstream csv;
  write_csv(csv, t, prov);
  CHECK(csv.str() ==
        "# schema=hapris.test/1\n"
        "L,x,note,config_hash,seed\n"
        "50,0.1,a,0123456789abcdef,7\n"
        "100,,b,0123456789abcdef,7\n");

  std::ostringstream js;
  write_json(js, t, prov);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["schema"] == "hapris.test/1");
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["x"] == 0.1);
  CHECK(doc["rows"][1]["x"].is_null());
  CHECK(doc["rows"][1]["config_hash"] == "0123456789abcdef");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
}

TEST_CASE("analytic-mode commands") {
  auto cfg = default_config();
  cfg.mode = Mode::analytic;
  const auto cov = coverage_sweep(cfg);
  CHECK(cov.table.rows.size() == 3 * 41);
  CHECK(cov.passed());

  const auto cap = capacity_sweep(cfg);
  CHECK(cap.table.rows.size() == 3 * 13);
  CHECK(cap.passed());
  CHECK(cap.checks.size() == 2);

  cfg.sweep = SweepSpec{SweepParam::h_ris, {25.0}};
  const auto dep = deployment_sweep(cfg, SweepParam::h_ris);
  CHECK(dep.table.rows.size() == 3);
  CHECK_THROWS_AS(deployment_sweep(cfg, SweepParam::mu_ris), ConfigError);
  CHECK_THROWS_AS(coverage_sweep(cfg), ConfigError);

  cfg.sweep = SweepSpec{SweepParam::h_ris, {25.0, 60000.0}};
  CHECK_THROWS_AS(deployment_sweep(cfg, SweepParam::h_ris), ConfigError);
}

TEST_CASE("command line exit codes and reproducible output") {
  const fs::path dir = scratch();
  const std::string cov = config_path("coverage.json");

  CHECK(run("coverage-sweep -q --mode analytic --out " + (dir / "a.csv").string()) == 0);
  CHECK(slurp(dir / "a.csv").rfind("# schema=hapris.coverage/1\n", 0) == 0);

  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\n  \"deployment\": {\"lambda_hap\": \"x\"}\n}\n";
  }
  CHECK(run("coverage-sweep -q --config " + (dir / "bad.json").string()) == 2);
  CHECK(run("coverage-sweep -q --no-such-flag") == 2);
  CHECK(run("capacity-sweep -q --config " + cov) == 2);

  // A scenario far from the reference fails the coverage anchor.
  {
    std::ofstream sparse(dir / "sparse.json");
    sparse << "{\"deployment\": {\"mu_ris\": 1e-6}}\n";
  }
  CHECK(run("validate quick -q --config " + (dir / "sparse.json").string()) == 1);

  const std::string mc = "montecarlo -q --trials 3000 --seed 5 --format json --config " + cov;
  CHECK(run(mc + " --threads 1 --out " + (dir / "m1.json").string()) == 0);
  CHECK(run(mc + " --threads 3 --out " + (dir / "m3.json").string()) == 0);
  const std::string m1 = slurp(dir / "m1.json");
  CHECK_FALSE(m1.empty());
  CHECK(m1 == slurp(dir / "m3.json"));
  CHECK(nlohmann::json::parse(m1)["seed"] == 5);
}
