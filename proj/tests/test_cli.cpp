#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracdyn/cli/commands.hpp"
#include "fracdyn/cli/config.hpp"
#include "fracdyn/cli/output.hpp"
#include "fracdyn/cli/table2.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace fracdyn;
using namespace fracdyn::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kExample1 = R"({
  "operator": "caputo",
  "alpha": 0.98,
  "params": {"a1": 3, "a2": 0.5, "a3": 4, "a4": 3, "a5": 4, "a6": 9, "a7": 4},
  "initial": {"x": 0.5, "y": 0.9, "z": 0.1},
  "horizon": 2,
  "step": 0.01
})";

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("fracdyn-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string config_error(const std::string& text) {
  try {
    parse_run_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json with(const char* base, const std::string& pointer, const json& value) {
  json j = json::parse(base);
  j[json::json_pointer(pointer)] = value;
  return j;
}

}  // namespace

TEST_CASE("config parses and echoes") {
  const auto cfg = parse_run_config(kExample1);
  CHECK(cfg.op == OperatorKind::Caputo);
  CHECK(*cfg.alpha == 0.98);
  CHECK(cfg.params.a5 == 4);
  CHECK(*cfg.initial == State3<double>(0.5, 0.9, 0.1));
  CHECK(cfg.cf_mode == CfScheme::Corrected);
  CHECK(cfg.normalization == 1.0);
  const auto again = parse_run_config(to_json(cfg).dump());
  CHECK(to_json(again) == to_json(cfg));
  CHECK(parse_cf_mode("paper") == CfScheme::Paper);
  CHECK_THROWS_AS(parse_operator("riemann"), ConfigError);
}

TEST_CASE("config diagnostics name the line or field") {
  CHECK(config_error("{\n  \"alpha\": 0.5,\n  \"params\": {,\n}") .rfind("cfg.json:3:", 0) == 0);
  CHECK(config_error("[1, 2]").find("object") != std::string::npos);
  CHECK(config_error(with(kExample1, "/colour", "red").dump()).find("'colour': unknown key") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/params/a8", 1).dump()).find("'params.a8'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/initial/w", 1).dump()).find("'initial.w'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/params/a2", -1).dump()).find("'params.a2'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/alpha", 1.5).dump()).find("'alpha'") != std::string::npos);
  CHECK(config_error(with(kExample1, "/alpha", "half").dump()).find("'alpha'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/operator", "gl").dump()).find("'operator'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/cf_mode", "fast").dump()).find("'cf_mode'") !=
        std::string::npos);
  CHECK(config_error(R"({"alpha": 0.5})").find("'params'") != std::string::npos);
  CHECK(config_error(R"({"params": {"a1": 1}})").find("'params.a2'") != std::string::npos);

  // Subcommand-specific requirements.
  CHECK(config_error(with(kExample1, "/horizon", 0).dump()).find("'horizon'") !=
        std::string::npos);
  CHECK(config_error(with(kExample1, "/step", 5).dump()).find("'horizon'") != std::string::npos);
  auto cfg = parse_run_config(R"({"params": {"a1":1,"a2":1,"a3":1,"a4":1,"a5":1,"a6":1,"a7":1}})");
  CHECK_THROWS_AS(cfg.require_alpha(), ConfigError);
  CHECK_THROWS_AS(cfg.require_simulation(), ConfigError);
}

TEST_CASE("CSV schema") {
  Trajectory<double> t;
  t.times = {0, 0.1};
  t.states.resize(2, 3);
  t.states << 1, 2, 3, 0.1234567890123456789, -1e-300, 5e20;
  const std::string csv = trajectory_csv(t);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,y,z");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    CHECK(line.find('\r') == std::string::npos);
    CHECK(line.find(' ') == std::string::npos);
  }
  CHECK(rows == 2);
  CHECK(csv.back() == '\n');
  CHECK(csv.find("0.12345678901234568") != std::string::npos);
  for (double v : {0.1, 1.0 / 3, -2.5e-7, 6.02214076e23, 1e-300})
    CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("simulate writes a trajectory and a manifest that re-runs bit-identically") {
  TempDir dir;
  spit(dir.path / "run.json", kExample1);
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(dir.path / "run.json", dir.path / "a", {}, out, err) == kExitOk);
  const std::string first = slurp(dir.path / "a" / "trajectory.csv");
  CHECK(first.rfind("t,x,y,z\n0,0.5,0.90000000000000002,0.10000000000000001\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 202);

  const json manifest = json::parse(slurp(dir.path / "a" / "manifest.json"));
  CHECK(manifest["diverged"] == false);
  CHECK(manifest["divergence_step"].is_null());
  CHECK(manifest["rows_written"] == 201);
  CHECK(manifest["outputs"] == json::array({"trajectory.csv"}));
  CHECK(manifest["version"] == kVersion);
  CHECK(manifest["wall_clock_seconds"].is_number());

  spit(dir.path / "echo.json", manifest["config"].dump());
  REQUIRE(cmd_simulate(dir.path / "echo.json", dir.path / "b", {}, out, err) == kExitOk);
  CHECK(slurp(dir.path / "b" / "trajectory.csv") == first);
  CHECK(!fs::exists(dir.path / "a" / "trajectory.csv.tmp"));
}

TEST_CASE("simulate overrides and failures") {
  TempDir dir;
  spit(dir.path / "run.json", with(kExample1, "/operator", "cf").dump());
  std::ostringstream out, err;
  Overrides o;
  o.alpha = 0.6;
  o.mode = CfScheme::Paper;
  REQUIRE(cmd_simulate(dir.path / "run.json", dir.path / "o", o, out, err) == kExitOk);
  const json m = json::parse(slurp(dir.path / "o" / "manifest.json"));
  CHECK(m["config"]["alpha"] == 0.6);
  CHECK(m["config"]["cf_mode"] == "paper");

  o.alpha = 0.0;
  CHECK(cmd_simulate(dir.path / "run.json", dir.path / "o", o, out, err) == kExitUsage);

  spit(dir.path / "zero.json", with(kExample1, "/horizon", 0).dump());
  CHECK(cmd_simulate(dir.path / "zero.json", dir.path / "z", {}, out, err) == kExitUsage);
  CHECK(!fs::exists(dir.path / "z" / "trajectory.csv"));
  CHECK(cmd_simulate(dir.path / "absent.json", dir.path / "z", {}, out, err) == kExitUsage);

  // Negative prey blows up in finite time.
  spit(dir.path / "div.json", with(kExample1, "/initial/x", -1).dump());
  err.str("");
  CHECK(cmd_simulate(dir.path / "div.json", dir.path / "d", {}, out, err) == kExitDivergence);
  const json dm = json::parse(slurp(dir.path / "d" / "manifest.json"));
  CHECK(dm["diverged"] == true);
  const int step = dm["divergence_step"];
  CHECK(step > 0);
  const std::string csv = slurp(dir.path / "d" / "trajectory.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == step + 1);
  CHECK(err.str().find("step " + std::to_string(step)) != std::string::npos);
}

TEST_CASE("equilibria and stability reports") {
  TempDir dir;
  spit(dir.path / "e1.json", kExample1);
  std::ostringstream out, err;
  REQUIRE(cmd_equilibria(dir.path / "e1.json", out, err) == kExitOk);
  const json eq = json::parse(out.str());
  REQUIRE(eq["equilibria"].size() == 5);
  CHECK(eq["equilibria"][4]["kind"] == "E4");
  CHECK(eq["equilibria"][4]["admissible"] == false);
  CHECK(eq["equilibria"][1]["point"] == json::array({6.0, 0.0, 0.0}));

  json e2 = json::parse(kExample1);
  e2["params"]["a5"] = 14;
  e2["alpha"] = 0.6;
  spit(dir.path / "e2.json", e2.dump());
  out.str("");
  REQUIRE(cmd_stability(dir.path / "e2.json", dir.path / "st", {}, out, err) == kExitOk);
  const json st = json::parse(slurp(dir.path / "st" / "stability_report.json"));
  CHECK(json::parse(out.str()) == st);
  std::vector<bool> caputo;
  for (const auto& r : st["equilibria"]) caputo.push_back(r["verdicts"]["caputo"]["stable"]);
  CHECK(caputo == std::vector<bool>{false, false, false, false, true});

  Overrides one;
  one.alpha = 1.0;
  out.str("");
  REQUIRE(cmd_stability(dir.path / "e2.json", std::nullopt, one, out, err) == kExitOk);
  const json classical = json::parse(out.str());
  for (const auto& r : classical["equilibria"]) {
    CHECK(r["verdicts"]["cf_theorem"] == "not applicable");
    CHECK(r["verdicts"]["cf_disk"] == "not applicable");
  }
}

TEST_CASE("classify") {
  std::ostringstream out, err;
  REQUIRE(cmd_classify(-1, 5, 0.5, out, err) == kExitOk);
  CHECK(json::parse(out.str())["region"] == "A");
  out.str("");
  REQUIRE(cmd_classify(1.333, 0, 0.6, out, err) == kExitOk);
  const json c = json::parse(out.str());
  CHECK(c["region"] == "C");
  CHECK(c["caputo_stable"] == false);
  CHECK(c["cf_disk_stable"] == false);
  CHECK(c["cf_theorem_stable"] == false);
  CHECK(cmd_classify(1, 0, 1.0, out, err) == kExitUsage);
  CHECK(cmd_classify(1, 0, 0.0, out, err) == kExitUsage);
  CHECK(cmd_classify(1, 0, -0.5, out, err) == kExitUsage);
}

TEST_CASE("table 2 harness without trajectories") {
  const auto summary = reproduce_table2(false);
  CHECK(summary.count("equilibrium") == 15);
  CHECK(summary.count("spectrum") == 15);
  CHECK(summary.count("verdict") == 40);
  CHECK(summary.count("trajectory") == 0);
  CHECK(summary.count("verdict", CellStatus::KnownDiscrepancy) == 1);
  CHECK(summary.ok());
  CHECK(is_known_discrepancy("example2", EquilibriumKind::E4, OperatorKind::CF, 0.6));
  CHECK_FALSE(is_known_discrepancy("example2", EquilibriumKind::E4, OperatorKind::Caputo, 0.6));
  using C = std::complex<double>;
  CHECK(multiset_distance({C(1), C(2), C(3)}, {C(3), C(1), C(2)}) == 0);
}

#ifdef FRACDYN_EXE
TEST_CASE("executable exit codes") {
  TempDir dir;
  spit(dir.path / "run.json", kExample1);
  spit(dir.path / "zero.json", with(kExample1, "/horizon", 0).dump());
  const std::string exe = FRACDYN_EXE;
  const std::string quiet = " >/dev/null 2>&1";
  auto run = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + quiet).c_str());
    return WEXITSTATUS(status);
  };
  const std::string cfg = (dir.path / "run.json").string();
  CHECK(run("simulate --config " + cfg + " --out " + (dir.path / "o").string()) == 0);
  CHECK(run("simulate --config " + cfg + " --out " + (dir.path / "o").string() + " --mode fast") == 1);
  CHECK(run("simulate --config " + (dir.path / "zero.json").string() + " --out " +
            (dir.path / "z").string()) == 1);
  CHECK(run("equilibria --config " + cfg) == 0);
  CHECK(run("stability --config " + cfg + " --alpha 1") == 0);
  CHECK(run("classify -1 5 0.5") == 0);
  CHECK(run("classify 1 0 1.5") == 1);
  CHECK(run("classify 1 0 --alpha 0.4") == 0);
  CHECK(run("nonsense") == 1);
  CHECK(run("--version") == 0);
}
#endif
