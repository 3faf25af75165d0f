#include "ekv/config.hpp"
#include "ekv/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ekv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kData = EKV_TEST_DATA;
const std::string kScenarios = std::string(EKV_TEST_DATA) + "/../../scenarios";

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ekv_test_" + name);
  fs::remove_all(d);
  return d;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(EKV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

const ConfigError* config_error(const std::function<void()>& f, ErrorKind& kind) {
  static thread_local std::unique_ptr<ConfigError> held;
  try {
    f();
  } catch (const ConfigError& e) {
    held = std::make_unique<ConfigError>(e);
    kind = e.kind();
    return held.get();
  } catch (const Error& e) {
    kind = e.kind();
  }
  return nullptr;
}

}  // namespace

TEST_CASE("echo of the minimal scenario matches the frozen file") {
  const RunConfig cfg = load_config(kData + "/minimal.yaml");
  CHECK(echo_config(cfg) == slurp(kData + "/minimal_echo.yaml"));
  CHECK(cfg.scenario.k == 3);
  CHECK(cfg.scenario.reg.lambda == 0.05);
}

TEST_CASE("echo is a fixed point of parsing") {
  for (const char* name : {"closed_shear", "compression_cutoff", "slip_box", "viscous_decay"}) {
    const std::string e1 = echo_config(load_config(kScenarios + "/" + name + ".yaml"));
    CHECK(echo_config(parse_config(e1)) == e1);
  }
}

TEST_CASE("overrides") {
  const RunConfig cfg = load_config(kData + "/minimal.yaml", {"regularization.lambda=0.02", "initial.F0=[[1.1,0],[0,1]]"});
  CHECK(cfg.scenario.reg.lambda == 0.02);
  CHECK(cfg.scenario.init.F0(0, 0) == 1.1);
  CHECK(echo_config(cfg).find("lambda: 0.02") != std::string::npos);
  ErrorKind k{};
  config_error([] { load_config(kData + "/minimal.yaml", {"regularization.lambda"}); }, k);
  CHECK(k == ErrorKind::ParseError);
}

TEST_CASE("validation errors") {
  ErrorKind k{};
  config_error([] { parse_config("initial: {theta_mean: 0.1, theta_amplitude: 0.2}\n"); }, k);
  CHECK(k == ErrorKind::ValidationError);
  config_error([] { parse_config("resolution: {k: 65, n: 200}\n"); }, k);
  CHECK(k == ErrorKind::ValidationError);
  config_error([] { parse_config("domain: {bc: slip}\nloads: {traction: {left: [0.1, 0]}}\n"); }, k);
  CHECK(k == ErrorKind::ValidationError);
  CHECK_NOTHROW(parse_config("domain: {bc: slip}\nloads: {traction: {left: [0, 0.1]}}\n"));
  config_error([] { parse_config("domain: {shape: disk}\n"); }, k);
  CHECK(k == ErrorKind::UnsupportedDomain);
}

TEST_CASE("unknown keys and syntax errors carry a position") {
  ErrorKind k{};
  const ConfigError* e = config_error([] { parse_config("name: x\nresolution:\n  k: 3\n  nn: 12\n"); }, k);
  REQUIRE(e);
  CHECK(k == ErrorKind::ValidationError);
  CHECK(e->line == 4);
  CHECK(e->column == 3);
  e = config_error([] { parse_config("name: x\nresolution: {k: 3, n: [\n"); }, k);
  REQUIRE(e);
  CHECK(k == ErrorKind::ParseError);
  CHECK(e->line >= 2);
  e = config_error([] { parse_config("resolution: {k: three}\n"); }, k);
  REQUIRE(e);
  CHECK(k == ErrorKind::ParseError);
  CHECK(e->line == 1);
}

TEST_CASE("command line: version and configuration errors") {
  CHECK(cli("version") == 0);
  CHECK(cli("frobnicate") == 2);
  const fs::path d = fresh_dir("bad");
  fs::create_directories(d);
  std::ofstream(d / "bad.yaml") << "resolution: {k: 3, n: 12}\nbogus: 1\n";
  CHECK(cli("run " + (d / "bad.yaml").string() + " --out " + (d / "out").string()) == 2);
  const auto j = nlohmann::json::parse(slurp(d / "out" / "error.json"));
  CHECK(j["error"] == "ValidationError");
  CHECK(j["line"] == 2);
  CHECK(cli("run " + (d / "missing.yaml").string() + " --out " + (d / "out2").string()) == 2);
}

TEST_CASE("command line: a short run writes its outputs deterministically") {
  const fs::path a = fresh_dir("run_a"), b = fresh_dir("run_b");
  const std::string args = "run " + kData + "/minimal.yaml --set initial.velocity=shear_wave --set initial.v_amplitude=0.1";
  REQUIRE(cli(args + " --out " + a.string()) == 0);
  REQUIRE(cli(args + " --out " + b.string()) == 0);
  for (const char* f : {"ledger.csv", "summary.json", "effective_config.yaml", "snapshot_000000.bin", "snapshot_000001.bin"})
    CHECK(fs::exists(a / f));
  CHECK_FALSE(fs::exists(a / "error.json"));
  CHECK(slurp(a / "ledger.csv") == slurp(b / "ledger.csv"));
  const auto s = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(s["status"] == "ok");
  CHECK(s["accepted_steps"] == 5);
  // the echoed configuration reruns to the same ledger
  const fs::path c = fresh_dir("run_c");
  REQUIRE(cli("run " + (a / "effective_config.yaml").string() + " --out " + c.string()) == 0);
  CHECK(slurp(a / "ledger.csv") == slurp(c / "ledger.csv"));
}

TEST_CASE("command line: material validation") {
  const fs::path d = fresh_dir("val");
  CHECK(cli("validate-material neo_hookean_thermal --out " + d.string()) == 0);
  CHECK(fs::exists(d / "validation_report.txt"));
  CHECK(nlohmann::json::parse(slurp(d / "validation.json"))["all_passed"] == true);
  CHECK(cli("validate-material sma_two_phase --set c0=1e-4 --out " + d.string()) == 1);
  CHECK(nlohmann::json::parse(slurp(d / "validation.json"))["all_passed"] == false);
  CHECK(cli("validate-material neo_hookean_thermal --set box.J_min=3 --set box.J_max=2 --out " + d.string()) == 2);
  CHECK(cli("validate-material no_such_material") == 2);
}

TEST_CASE("command line: compression activates the cut-off") {
  const fs::path d = fresh_dir("cutoff");
  REQUIRE(cli("run " + kScenarios + "/compression_cutoff.yaml --set integrator.t_end=0.1 --out " + d.string()) == 0);
  const auto s = nlohmann::json::parse(slurp(d / "summary.json"));
  CHECK(s["cutoff_activations"].get<int>() > 0);
  CHECK(s["status"] == "ok");
}
