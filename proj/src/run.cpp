#include "ekv/run.hpp"

#include "ekv/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace ekv {

namespace {

double doubling_error(const Eigen::VectorXd& coarse, const Eigen::VectorXd& fine, double tol) {
  double e = 0.0;
  for (int i = 0; i < fine.size(); ++i)
    e = std::max(e, std::abs(coarse(i) - fine(i)) / (tol * (1.0 + std::abs(fine(i)))));
  return e;
}

}  // namespace

RunResult run(Model& m, const RunOptions& opt, const RunCallbacks& cb) { return run(m, m.initial_state(), opt, cb); }

RunResult run(Model& m, const State& s0, const RunOptions& opt, const RunCallbacks& cb) {
  const IntegratorSettings& is = m.scenario().integ;
  if (!(is.dt > 0.0)) throw Error(ErrorKind::ValidationError, "integrator dt must be positive");
  const auto start = std::chrono::steady_clock::now();
  RunResult res;
  State s = s0;
  Evaluation ev = m.evaluate(s);
  int accepted = 0;
  auto accept = [&](State next, Evaluation next_ev) {
    s = std::move(next);
    ev = std::move(next_ev);
    EnergyLedger l = compute_ledger(m, ev, s.t);
    res.ledger.push_back(l);
    if (cb.on_step) cb.on_step(s, l);
    if (opt.trajectory_every > 0 && accepted % opt.trajectory_every == 0) res.trajectory.push_back(s);
    ++accepted;
  };
  {
    State first = s;
    Evaluation e0 = ev;
    accept(std::move(first), std::move(e0));
  }
  const double t_end = opt.t_end;
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t_end));
  double dt = is.dt;
  while (s.t < t_end - eps_t) {
    if (is.max_wall_seconds > 0.0) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (el > is.max_wall_seconds) throw Error(ErrorKind::Timeout, "wall-clock budget exceeded");
    }
    const double h = std::min(dt, t_end - s.t);
    if (!is.adaptive) {
      State next;
      try {
        next = m.step(s, h, &ev);
      } catch (const StepRejected& e) {
        throw Error(ErrorKind::InvalidState, std::string("fixed-step run left the admissible set: ") + e.what());
      }
      if (t_end - next.t < eps_t) next.t = t_end;
      Evaluation ne = m.evaluate(next);
      ++m.stats().accepted_steps;
      accept(std::move(next), std::move(ne));
      continue;
    }
    try {
      const State big = m.step(s, h, &ev);
      const State half = m.step(s, 0.5 * h, &ev);
      Evaluation half_ev = m.evaluate(half);
      State fine = m.step(half, 0.5 * h, &half_ev);
      const double err = doubling_error(m.pack(big), m.pack(fine), is.tol);
      const int p = nominal_order(is.scheme);
      const double fac = err == 0.0 ? 2.0 : std::clamp(0.9 * std::pow(err, -1.0 / (p + 1)), 0.2, 2.0);
      if (err > 1.0) {
        ++m.stats().rejected_steps;
        dt = h * fac;
        if (dt < is.dt_min) throw Error(ErrorKind::InvalidState, "adaptive step fell below dt_min");
        continue;
      }
      if (t_end - fine.t < eps_t) fine.t = t_end;
      m.stats().accepted_steps += 2;
      accept(half, std::move(half_ev));
      Evaluation fe = m.evaluate(fine);
      accept(std::move(fine), std::move(fe));
      dt = std::min(is.dt, h * fac);
    } catch (const StepRejected& e) {
      ++m.stats().rejected_steps;
      dt = std::min(e.suggested_dt, 0.5 * h);
      if (dt < is.dt_min) throw Error(ErrorKind::InvalidState, std::string("step rejected below dt_min: ") + e.what());
    }
  }
  balance_residuals(res.ledger);
  res.final_state = s;
  if (opt.trajectory_every > 0 && (res.trajectory.empty() || res.trajectory.back().t != s.t))
    res.trajectory.push_back(s);
  if (opt.trajectory_every == 0) res.trajectory.push_back(s);
  res.stats = m.stats();
  return res;
}

}  // namespace ekv
