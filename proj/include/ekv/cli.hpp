#pragma once

#include "ekv/config.hpp"
#include "ekv/run.hpp"

#include <string>
#include <vector>

namespace ekv {

enum ExitCode { kExitOk = 0, kExitInvariant = 1, kExitConfig = 2, kExitRuntime = 3 };

struct InvariantVerdict {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double limit = 0.0;
};

// Hard invariants checked after a run: temperature floor, sign of the
// dissipation terms, ρ det F consistency and, for closed runs (periodic,
// no gravity, ε = 0), the total energy residual.
std::vector<InvariantVerdict> check_run_invariants(const RunConfig& cfg, const RunResult& res);

// Runs the scenario and writes ledger.csv, effective_config.yaml,
// summary.json and snapshots under cfg.out_dir.
int cmd_run(const RunConfig& cfg);
int cmd_validate_material(const ValidationConfig& vc, const std::string& out_dir);

// Entry point of the `ekv` executable.  Failures write error.json into the
// output directory (when known) and map to the exit codes above.
int cli_main(int argc, char** argv);

}  // namespace ekv
