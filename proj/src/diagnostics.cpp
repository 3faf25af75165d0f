#include "ekv/diagnostics.hpp"

#include "ekv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ekv {

namespace {

struct FieldRef {
  const char* name;
  double EnergyLedger::*member;
};

const std::vector<FieldRef>& fields() {
  static const std::vector<FieldRef> f = {
      {"t", &EnergyLedger::t},
      {"kinetic", &EnergyLedger::kinetic},
      {"stored", &EnergyLedger::stored},
      {"heat", &EnergyLedger::heat},
      {"diss_bulk", &EnergyLedger::diss_bulk},
      {"diss_boundary", &EnergyLedger::diss_boundary},
      {"power_gravity", &EnergyLedger::power_gravity},
      {"power_traction", &EnergyLedger::power_traction},
      {"power_adiabatic", &EnergyLedger::power_adiabatic},
      {"flux_heat_boundary", &EnergyLedger::flux_heat_boundary},
      {"entropy_total", &EnergyLedger::entropy_total},
      {"entropy_production", &EnergyLedger::entropy_production},
      {"residual_mech", &EnergyLedger::residual_mech},
      {"residual_total", &EnergyLedger::residual_total},
      {"heat_source_bulk", &EnergyLedger::heat_source_bulk},
      {"heat_boundary_viscous", &EnergyLedger::heat_boundary_viscous},
      {"theta_min", &EnergyLedger::theta_min},
      {"theta_max", &EnergyLedger::theta_max},
      {"det_min", &EnergyLedger::det_min},
      {"cutoff_nodes", &EnergyLedger::cutoff_nodes},
      {"rho_det_drift", &EnergyLedger::rho_det_drift},
      {"entropy_skipped_nodes", &EnergyLedger::entropy_skipped_nodes},
  };
  return f;
}

}  // namespace

const std::vector<std::string>& ledger_field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& f : fields()) n.emplace_back(f.name);
    return n;
  }();
  return names;
}

std::vector<double> ledger_values(const EnergyLedger& l) {
  std::vector<double> v;
  for (const auto& f : fields()) v.push_back(l.*(f.member));
  return v;
}

std::string ledger_csv_header() {
  std::string s;
  for (const auto& n : ledger_field_names()) s += (s.empty() ? "" : ",") + n;
  return s;
}

std::string ledger_csv_row(const EnergyLedger& l) {
  std::string s;
  char buf[40];
  bool first = true;
  for (double v : ledger_values(l)) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) s += ',';
    s += buf;
    first = false;
  }
  return s;
}

EnergyLedger compute_ledger(const Quadrature& q, const NodalState& s, const PointwiseFields& pw, const Loads& loads,
                            const RegularizationParams& rp, double t) {
  EnergyLedger l;
  l.t = t;
  const double w = q.weight();
  const int N = q.grid.size();
  const Eigen::MatrixXd& v = s.kin.v;
  const Eigen::VectorXd v2 = v.rowwise().squaredNorm();
  l.kinetic = 0.5 * w * s.rho.dot(v2);
  l.stored = w * pw.stored.sum();
  l.heat = w * pw.omega.sum();
  l.diss_bulk = w * (pw.diss.sum() + pw.hyper.sum());
  l.power_gravity = w * pw.grav.dot(v * loads.g);
  l.power_adiabatic = w * pw.adiabatic.sum();
  l.entropy_total = w * pw.eta.sum();
  l.heat_source_bulk = w * pw.xi_eps.sum();
  double prod = 0.0;
  int skipped = 0;
  for (int n = 0; n < N; ++n) {
    const double th = s.th.theta(n);
    if (!(th > 0.0)) {
      ++skipped;
      continue;
    }
    prod += (pw.diss(n) + pw.hyper(n)) / th + pw.kappa(n) * s.th.grad.row(n).squaredNorm() / (th * th);
  }
  l.entropy_production = w * prod;
  l.entropy_skipped_nodes = skipped;
  if (q.has_boundary) {
    const BoundaryHeat bh = boundary_heat(q, s, loads, rp);
    for (int e = 0; e < 4; ++e) {
      const double ew = q.edge_weight(e);
      const Eigen::MatrixXd& ev = s.kin.edge_v[e];
      l.diss_boundary += ew * rp.nu_flat * ev.rowwise().squaredNorm().sum();
      l.power_traction += ew * (ev * loads.traction[e]).sum();
      l.flux_heat_boundary += ew * bh.flux[e].sum();
      l.heat_boundary_viscous += ew * bh.viscous[e].sum();
    }
  }
  l.theta_min = s.th.theta.minCoeff();
  l.theta_max = s.th.theta.maxCoeff();
  l.det_min = pw.det.minCoeff();
  l.cutoff_nodes = static_cast<double>((pw.pi.array() < 1.0).count());
  l.rho_det_drift = (s.rho.cwiseProduct(pw.det) - s.rho_R).cwiseAbs().maxCoeff();
  return l;
}

EnergyLedger compute_ledger(const Model& m, const Evaluation& ev, double t) {
  const Scenario& sc = m.scenario();
  return compute_ledger(m.quadrature(), ev.nodal, ev.pw, sc.loads, sc.reg, t);
}

EnergyLedger compute_ledger(const Model& m, const State& s) { return compute_ledger(m, m.evaluate(s), s.t); }

void balance_residuals(std::vector<EnergyLedger>& series) {
  if (series.empty()) return;
  const EnergyLedger& a = series.front();
  double int_mech = 0.0, int_heat = 0.0;
  auto mech_rate = [](const EnergyLedger& l) {
    return l.diss_bulk + l.diss_boundary - l.power_gravity + l.power_adiabatic - l.power_traction;
  };
  auto heat_rate = [](const EnergyLedger& l) {
    return l.heat_source_bulk + l.power_adiabatic + l.flux_heat_boundary + l.heat_boundary_viscous;
  };
  series.front().residual_mech = series.front().residual_total = 0.0;
  for (size_t i = 1; i < series.size(); ++i) {
    const EnergyLedger& p = series[i - 1];
    EnergyLedger& c = series[i];
    const double dt = c.t - p.t;
    int_mech += 0.5 * dt * (mech_rate(p) + mech_rate(c));
    int_heat += 0.5 * dt * (heat_rate(p) + heat_rate(c));
    c.residual_mech = (c.kinetic - a.kinetic) + (c.stored - a.stored) + int_mech;
    c.residual_total = c.residual_mech + (c.heat - a.heat) - int_heat;
  }
}

ClausiusDuhemVerdict clausius_duhem_check(const std::vector<EnergyLedger>& series, double rel_tol) {
  for (const auto& l : series)
    if (l.flux_heat_boundary != 0.0 || l.heat_boundary_viscous != 0.0 || l.power_traction != 0.0)
      throw Error(ErrorKind::NotIsolated, "clausius_duhem_check: series has boundary heat or traction power");
  ClausiusDuhemVerdict v;
  double smax = 0.0, produced = 0.0;
  for (size_t i = 0; i < series.size(); ++i) {
    smax = std::max(smax, std::abs(series[i].entropy_total));
    if (i > 0)
      produced += 0.5 * (series[i].t - series[i - 1].t) *
                  (series[i].entropy_production + series[i - 1].entropy_production);
    if (series[i].entropy_skipped_nodes > 0) v.skipped_nodes = true;
  }
  v.s_scale = smax + produced;
  v.tolerance = rel_tol * v.s_scale;
  for (size_t i = 1; i < series.size(); ++i) {
    const double d = series[i].entropy_total - series[i - 1].entropy_total;
    if (d < v.worst_increment) {
      v.worst_increment = d;
      v.worst_index = static_cast<int>(i);
    }
  }
  v.passed = v.worst_increment >= -v.tolerance;
  if (v.skipped_nodes) v.annotation = "production skipped at nodes with theta <= 0";
  return v;
}

}  // namespace ekv
