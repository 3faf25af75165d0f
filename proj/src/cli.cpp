#include "ekv/cli.hpp"

#include "ekv/errors.hpp"
#include "ekv/snapshot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace ekv {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw Error(ErrorKind::IOError, "cannot write " + p.string());
  f << text;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::UsageError:
    case ErrorKind::UnsupportedDomain:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

void write_error(const std::string& dir, const Error& e) {
  nlohmann::json j;
  j["error"] = to_string(e.kind());
  j["message"] = e.what();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e); ce && ce->line > 0) {
    j["line"] = ce->line;
    j["column"] = ce->column;
  }
  if (const auto* sr = dynamic_cast<const StepRejected*>(&e)) j["suggested_dt"] = sr->suggested_dt;
  std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream f(fs::path(dir) / "error.json");
  if (f) f << j.dump(2) << "\n";
}

}  // namespace

std::vector<InvariantVerdict> check_run_invariants(const RunConfig& cfg, const RunResult& res) {
  const Scenario& sc = cfg.scenario;
  std::vector<InvariantVerdict> v;
  if (res.ledger.empty()) return v;
  const auto& L = res.ledger;
  const double theta0_max = std::max(L.front().theta_max, 0.0);
  InvariantVerdict floor{"theta_floor", true, 0.0, -1e-10 * theta0_max};
  InvariantVerdict diss{"dissipation_nonnegative", true, 0.0, 0.0};
  InvariantVerdict drift{"rho_det_consistency", true, 0.0, 1e-6 * std::max(1.0, sc.init.rho_R)};
  floor.value = L.front().theta_min;
  for (const auto& l : L) {
    floor.value = std::min(floor.value, l.theta_min);
    diss.value = std::min({diss.value, l.diss_bulk, l.diss_boundary});
    drift.value = std::max(drift.value, l.rho_det_drift);
  }
  floor.passed = floor.value >= floor.limit;
  diss.limit = -1e-14 * std::max(1.0, L.front().energy_total());
  diss.passed = diss.value >= diss.limit;
  drift.passed = drift.value <= drift.limit;
  v.push_back(floor);
  v.push_back(diss);
  v.push_back(drift);
  const bool closed = sc.domain.bc == BcMode::Periodic && sc.loads.g == Vec2::Zero() && sc.reg.epsilon == 0.0 &&
                      sc.prescribed == PrescribedVelocity::None;
  if (closed) {
    InvariantVerdict en{"total_energy_balance", true, 0.0, 1e-4 * std::abs(L.front().energy_total())};
    for (const auto& l : L) en.value = std::max(en.value, std::abs(l.residual_total));
    en.passed = en.value <= en.limit;
    v.push_back(en);
  }
  return v;
}

int cmd_run(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IOError, "cannot create output directory " + dir.string());
  fs::remove(dir / "error.json", ec);
  write_text(dir / "effective_config.yaml", echo_config(cfg));

  Model model(cfg.scenario);
  RunOptions opt;
  opt.t_end = cfg.scenario.integ.t_end;
  int step_index = 0;
  int snapshots = 0;
  auto snapshot = [&](const State& s) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06d", snapshots++);
    const Snapshot snap = make_snapshot(model, s);
    write_snapshot((dir / (std::string(name) + ".bin")).string(), snap);
    if (cfg.output.vtk) write_vtk((dir / (std::string(name) + ".vtk")).string(), snap);
  };
  RunCallbacks cb;
  double last_snapshot_t = -1.0;
  cb.on_step = [&](const State& s, const EnergyLedger&) {
    if (step_index == 0 || (cfg.output.snapshot_every > 0 && step_index % cfg.output.snapshot_every == 0)) {
      snapshot(s);
      last_snapshot_t = s.t;
    }
    ++step_index;
  };
  RunResult res = run(model, opt, cb);
  if (last_snapshot_t != res.final_state.t) snapshot(res.final_state);

  {
    std::ofstream f(dir / "ledger.csv");
    if (!f) throw Error(ErrorKind::IOError, "cannot write ledger.csv");
    f << ledger_csv_header() << "\n";
    for (size_t i = 0; i < res.ledger.size(); ++i)
      if (i % cfg.output.ledger_every == 0 || i + 1 == res.ledger.size()) f << ledger_csv_row(res.ledger[i]) << "\n";
  }

  const auto inv = check_run_invariants(cfg, res);
  nlohmann::json s;
  s["scenario"] = cfg.scenario.name;
  s["t_end"] = res.final_state.t;
  s["accepted_steps"] = res.stats.accepted_steps;
  s["rejected_steps"] = res.stats.rejected_steps;
  s["mass_factorizations"] = res.stats.mass_factorizations;
  s["implicit_iterations"] = res.stats.implicit_iterations;
  double tmin = res.ledger.front().theta_min, dmin = res.ledger.front().det_min, rm = 0.0, rt = 0.0, cmax = 0.0;
  int activations = 0;
  for (const auto& l : res.ledger) {
    tmin = std::min(tmin, l.theta_min);
    dmin = std::min(dmin, l.det_min);
    rm = std::max(rm, std::abs(l.residual_mech));
    rt = std::max(rt, std::abs(l.residual_total));
    cmax = std::max(cmax, l.cutoff_nodes);
    activations += l.cutoff_nodes > 0.0;
  }
  s["min_theta"] = tmin;
  s["min_det_F"] = dmin;
  s["cutoff_activations"] = activations;
  s["cutoff_nodes_max"] = cmax;
  s["max_abs_residual_mech"] = rm;
  s["max_abs_residual_total"] = rt;
  s["energy_total_initial"] = res.ledger.front().energy_total();
  s["snapshots"] = snapshots;
  bool ok = true;
  for (const auto& v : inv) {
    s["invariants"][v.name] = {{"passed", v.passed}, {"value", v.value}, {"limit", v.limit}};
    ok = ok && v.passed;
  }
  s["status"] = ok ? "ok" : "invariant_violation";
  write_text(dir / "summary.json", s.dump(2) + "\n");
  std::cout << "run " << cfg.scenario.name << ": " << res.ledger.size() - 1 << " steps to t=" << res.final_state.t
            << ", min theta " << tmin << ", min det F " << dmin << ", max |residual_total| " << rt
            << (ok ? "" : " [invariant violated]") << "\n";
  return ok ? kExitOk : kExitInvariant;
}

int cmd_validate_material(const ValidationConfig& vc, const std::string& out_dir) {
  const MaterialPtr<2> m = make_material(vc.material, vc.q);
  const HypothesisReport rep = validate_hypotheses<2>(*m, vc.box, vc.samples, -1.0, vc.seed);
  std::string text = "material " + vc.material.name + "\n";
  nlohmann::json j;
  j["material"] = vc.material.name;
  j["params"] = vc.material.params;
  if (!vc.material.alpha_kind.empty()) {
    j["alpha"]["kind"] = vc.material.alpha_kind;
    j["alpha"]["params"] = vc.material.alpha_params;
  }
  j["box"] = {{"J_min", vc.box.J_min},         {"J_max", vc.box.J_max},         {"anisotropy", vc.box.anisotropy},
              {"theta_min", vc.box.theta_min}, {"theta_max", vc.box.theta_max}, {"e_max", vc.box.e_max}};
  j["samples"] = vc.samples;
  for (const auto& c : rep.checks) {
    char line[512];
    std::snprintf(line, sizeof line, "  %-22s %s  worst=%.6g  constant=%.6g  %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.worst, c.constant, c.detail.c_str());
    text += line;
    j["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"worst", c.worst}, {"constant", c.constant}, {"detail", c.detail}});
  }
  text += rep.all_passed() ? "all checks passed\n" : "some checks failed\n";
  j["all_passed"] = rep.all_passed();
  std::cout << text;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    write_text(fs::path(out_dir) / "validation_report.txt", text);
    write_text(fs::path(out_dir) / "validation.json", j.dump(2) + "\n");
  }
  return rep.all_passed() ? kExitOk : kExitInvariant;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"thermo-visco-elastic solver"};
  app.require_subcommand(1);

  std::string scenario, out_dir = "out";
  std::vector<std::string> sets;
  int threads = 0;
  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario, "scenario YAML file")->required();
  run_cmd->add_option("--set", sets, "override a config key, e.g. --set regularization.lambda=0.02");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--threads", threads, "worker threads for quadrature loops");

  std::string material, vout;
  std::vector<std::string> vsets;
  auto* val_cmd = app.add_subcommand("validate-material", "check the constitutive hypotheses on a sample box");
  val_cmd->add_option("name", material, "material name")->required();
  val_cmd->add_option("--set", vsets, "parameter (K=2, alpha.kind=quadratic, box.J_min=0.5, samples=400)");
  val_cmd->add_option("--out", vout, "directory for the report files");

  auto* ver_cmd = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (ver_cmd->parsed()) {
    std::cout << "ekv " << EKV_VERSION << "\n";
    return kExitOk;
  }

  if (val_cmd->parsed()) {
    try {
      return cmd_validate_material(parse_validation_overrides(material, vsets), vout);
    } catch (const Error& e) {
      write_error(vout, e);
      return exit_code_for(e.kind());
    }
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  try {
    RunConfig cfg = load_config(scenario, sets);
    cfg.out_dir = out_dir;
    return cmd_run(cfg);
  } catch (const Error& e) {
    write_error(out_dir, e);
    return e.kind() == ErrorKind::IOError && dynamic_cast<const ConfigError*>(&e) ? kExitConfig
                                                                                  : exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace ekv
