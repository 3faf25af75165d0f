#pragma once

#include "ekv/diagnostics.hpp"
#include "ekv/dynamics.hpp"

#include <functional>
#include <vector>

namespace ekv {

struct RunOptions {
  double t_end = 1.0;
  int trajectory_every = 0;  // keep every n-th accepted state; 0 keeps only the final one
};

struct RunCallbacks {
  // called with every accepted state (the initial one included) and its ledger row
  std::function<void(const State&, const EnergyLedger&)> on_step;
};

struct RunResult {
  std::vector<State> trajectory;
  std::vector<EnergyLedger> ledger;  // one row per accepted state, residuals filled
  State final_state;
  StepStats stats;
};

// Marches from the initial state to t_end.  Fixed-step mode turns a
// rejected step into InvalidState; adaptive mode controls the step by step
// doubling and halves on rejection down to dt_min.  Timeout when the wall
// clock budget of the integrator settings is exceeded.
RunResult run(Model& m, const RunOptions& opt, const RunCallbacks& cb = {});
RunResult run(Model& m, const State& s0, const RunOptions& opt, const RunCallbacks& cb = {});

}  // namespace ekv
