#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "carpet/config.hpp"
#include "carpet/experiments.hpp"
#include "carpet/output.hpp"

using namespace carpet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("carpet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("minimal killing-run config fills its defaults") {
  const ExperimentConfig cfg = parse_config(R"({"experiment": "killing-run", "strategy": {"c": -1}})");
  CHECK(cfg.experiment == Experiment::KillingRun);
  CHECK(cfg.killing.c == -1.0);
  CHECK(cfg.killing.dx == 0.03);
  CHECK(cfg.killing.steady.t_check == 25.0);
  CHECK(contains(cfg.defaulted, "grid.dx"));
  CHECK(contains(cfg.defaulted, "scheme.dt"));
  CHECK_FALSE(contains(cfg.defaulted, "strategy.c"));
  CHECK(cfg.resolved["grid"]["x_min"] == -75.0);
}

TEST_CASE("check interval follows the time step") {
  const ExperimentConfig cfg = parse_config(R"({"scheme": {"dt": 0.25}})", "killing-run");
  CHECK(cfg.killing.steady.t_check == 12.5);
}

TEST_CASE("non-positive time step is rejected") {
  try {
    parse_config(R"({"experiment": "killing-run", "scheme": {"dt": 0}})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "scheme.dt");
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  try {
    parse_config(R"({"experiment": "killing-run", "strategy": {"width": 3}})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "strategy.width");
  }
  CHECK_THROWS_AS(parse_config(R"({"experiment": "killing-run", "quadrature": {}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "flying-carpet"})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"experiment": "killing-run", "strategy": {"c": "fast"}})"), ValidationError);
}

TEST_CASE("experiment in the file must agree with the request") {
  CHECK_THROWS_AS(parse_config(R"({"experiment": "killing-run"})", "sterile-run"), ValidationError);
  CHECK(parse_config("{}", "sterile-run").experiment == Experiment::SterileRun);
}

TEST_CASE("syntax errors report their line") {
  try {
    parse_config("{\n  \"experiment\": \"killing-run\",\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("bundled reference preset") {
  const ExperimentConfig cfg = load_config(std::string(CARPET_PRESET_DIR) + "/reference-lambda-sweep.json");
  CHECK(cfg.experiment == Experiment::LambdaSweep);
  CHECK(cfg.killing.x_min == -75.0);
  CHECK(cfg.killing.x_max == 75.0);
  CHECK(cfg.killing.dx == 0.03);
  CHECK(cfg.killing.dt == 0.5);
  CHECK(cfg.killing.term.alpha == 0.25);
  CHECK(cfg.search.c_values.front() == 0.0);
  CHECK(cfg.search.c_values.back() == -2.2);
  CHECK(cfg.search.L_high == 39.0);
}

TEST_CASE("every bundled preset loads") {
  for (const auto& entry : fs::directory_iterator(CARPET_PRESET_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
  }
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  CHECK(csv_columns({"x", "u"}, {Vector::LinSpaced(2, 0.0, 1.0), Vector::Zero(2)}) == "x,u\n0,0\n1,0\n");
}

TEST_CASE("sterile profile output respects the bound, and replay detects tampering") {
  const fs::path dir = scratch("ms");
  const ExperimentConfig cfg = parse_config(R"({"grid": {"dx": 0.25}})", "ms-profile");
  const RunResult res = run_experiment(cfg, dir, 4);
  CHECK(res.artifacts.summary["max"].get<double>() <= 10.0);
  CHECK(res.artifacts.summary["max_abs_spectral_diff"].get<double>() <= 1e-6);
  const std::string csv = slurp(dir / "profiles.csv");
  CHECK(csv.rfind("x,m,m_spectral\n", 0) == 0);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "summary.json"));

  const ReplayReport ok = replay(dir / "manifest.json", 2);
  CHECK(ok.mismatched.empty());
  CHECK(contains(ok.matched, "profiles.csv"));

  spit(dir / "profiles.csv", csv + "0,0,0\n");
  try {
    replay(dir / "manifest.json", 1);
    FAIL("expected Mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
    CHECK(std::string(e.what()).find("profiles.csv") != std::string::npos);
  }
}

TEST_CASE("manifest records defaults and digests") {
  const fs::path dir = scratch("manifest");
  const ExperimentConfig cfg = parse_config(R"({"strategy": {"L": 8}, "grid": {"dx": 0.25}})", "ms-profile");
  run_experiment(cfg, dir, 1);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["config"]["strategy"]["L"] == 8.0);
  CHECK(m["config"]["quadrature"]["panels"] == 4000);
  CHECK(m["version"] == CARPET_VERSION);
  const auto& defaulted = m["defaulted"];
  CHECK(std::find(defaulted.begin(), defaulted.end(), "quadrature.panels") != defaulted.end());
  CHECK(m["files"]["profiles.csv"]["sha256"] == sha256_file(dir / "profiles.csv"));
}

TEST_CASE("outputs do not depend on the worker count") {
  const std::string text = R"({"search": {"c_values": [0, -1, -2], "L_low": 0.1, "L_high": 39, "tol": 0.1}})";
  const ExperimentConfig cfg = parse_config(text, "lambda-sweep");
  const fs::path a = scratch("w1");
  const fs::path b = scratch("w4");
  const RunResult one = run_experiment(cfg, a, 1);
  run_experiment(cfg, b, 4);
  for (const auto& [name, content] : one.artifacts.files) CHECK(slurp(a / name) == slurp(b / name));
  CHECK(one.artifacts.summary["lambda_monotone_in_abs_c"] == true);
}

TEST_CASE("heterogeneous release uses eleven twelfths of the count") {
  const ExperimentConfig cfg = parse_config(R"({"search": {"L_star": 60}})", "hetero-compare");
  const RunArtifacts a = compute_experiment(cfg, 3);
  CHECK(a.summary["ratio"].get<double>() == Catch::Approx(11.0 / 12.0).epsilon(1e-15));
  CHECK(a.summary["homogeneous"] == "Eradication");
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  CHECK_THROWS_AS(resolve_workers(0), ValidationError);
  CHECK(resolve_workers(std::nullopt) >= 1);
}

TEST_CASE("command-line exit codes") {
  const char* bin = std::getenv("CARPET_BIN");
  if (!bin) SKIP("CARPET_BIN not set");
  const fs::path dir = scratch("exit");
  spit(dir / "bad.json", R"({"scheme": {"dt": -1}})");
  spit(dir / "bracket.json", R"({"search": {"c_values": [-1], "L_low": 30, "L_high": 39, "tol": 0.1}})");
  spit(dir / "ok.json", R"({"strategy": {"L": 5}, "grid": {"dx": 0.5}})");
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(bin) + " " + args + " > " + (dir / "stdout.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("killing-run --config " + (dir / "bad.json").string() + " --out " + dir.string()) == 2);
  const json err = json::parse(slurp(dir / "stdout.txt"));
  CHECK(err["error"]["field"] == "scheme.dt");
  CHECK(run("lambda-sweep --config " + (dir / "bracket.json").string() + " --out " + dir.string()) == 4);
  CHECK(json::parse(slurp(dir / "stdout.txt"))["error"]["kind"] == "BadBracket");
  CHECK(run("ms-profile --config " + (dir / "ok.json").string() + " --out " + (dir / "ms").string()) == 0);
  CHECK(run("replay " + (dir / "ms" / "manifest.json").string()) == 0);
  CHECK(run("killing-run --config " + (dir / "missing.json").string()) == 2);
}
