#pragma once

#include "ekv/dynamics.hpp"

#include <string>
#include <vector>

namespace ekv {

// Energy, entropy and consistency bookkeeping at one time.  The first
// fourteen fields (time included) follow the ledger CSV column order; the
// remaining ones are appended after them.
struct EnergyLedger {
  double t = 0.0;
  double kinetic = 0.0;             // ∫ρ|v|²/2
  double stored = 0.0;              // ∫π_λφ(F)/det F
  double heat = 0.0;                // ∫ω(F,θ)
  double diss_bulk = 0.0;           // ∫D:e + ν|∇e|^p
  double diss_boundary = 0.0;       // ∮ν_♭|v|²
  double power_gravity = 0.0;       // ∫√(ρ_Rρ/det_λ F) g·v
  double power_traction = 0.0;      // ∮f·v
  double power_adiabatic = 0.0;     // ∫(γ_F'Fᵀ/det F):e, damped and cut off as in the stress
  double flux_heat_boundary = 0.0;  // ∮h_ε(θ)
  double entropy_total = 0.0;       // ∫η
  double entropy_production = 0.0;  // ∫ξ/θ + κ|∇θ|²/θ² over nodes with θ > 0
  double residual_mech = 0.0;
  double residual_total = 0.0;

  double heat_source_bulk = 0.0;       // ∫ξ_ε as seen by the heat equation
  double heat_boundary_viscous = 0.0;  // ∮ν_♭|v|²/(2+ε|v|²)
  double theta_min = 0.0, theta_max = 0.0;
  double det_min = 0.0;
  double cutoff_nodes = 0.0;           // nodes with π_λ(F) < 1
  double rho_det_drift = 0.0;          // max |ρ det F - ρ_R|
  double entropy_skipped_nodes = 0.0;  // nodes with θ <= 0 left out of the production

  double energy_total() const { return kinetic + stored + heat; }
};

const std::vector<std::string>& ledger_field_names();
std::vector<double> ledger_values(const EnergyLedger& l);
std::string ledger_csv_header();
std::string ledger_csv_row(const EnergyLedger& l);

EnergyLedger compute_ledger(const Quadrature& q, const NodalState& s, const PointwiseFields& pw,
                            const Loads& loads, const RegularizationParams& rp, double t);
EnergyLedger compute_ledger(const Model& m, const Evaluation& ev, double t);
EnergyLedger compute_ledger(const Model& m, const State& s);

// Fills residual_mech and residual_total of every sample with the
// trapezoidal time-integrated balances measured from the first sample:
//   mech:  ΔK + ΔS + ∫(diss_bulk + diss_boundary - P_g + P_ad - P_f) dt
//   heat:  ΔH - ∫(ξ_ε + P_ad + h_ε + viscous boundary heat) dt
//   total = mech + heat
void balance_residuals(std::vector<EnergyLedger>& series);

struct ClausiusDuhemVerdict {
  bool passed = true;
  double worst_increment = 0.0;  // most negative ΔS (0 if none)
  int worst_index = -1;          // sample index at the end of that increment
  double s_scale = 0.0;
  double tolerance = 0.0;
  bool skipped_nodes = false;    // some sample had θ <= 0 nodes
  std::string annotation;
};

// Every increment must satisfy ΔS >= -rel_tol·S_scale with
// S_scale = max|S| + ∫ production dt.  Throws NotIsolated when the series
// carries boundary heat or traction power.
ClausiusDuhemVerdict clausius_duhem_check(const std::vector<EnergyLedger>& series, double rel_tol = 1e-8);

}  // namespace ekv
