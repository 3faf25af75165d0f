#pragma once

// Shared helpers for the unit tests and the acceptance binary.

#include "ekv/hypotheses.hpp"
#include "ekv/materials.hpp"
#include "ekv/oracles.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ekv::testing {

inline std::vector<std::pair<std::string, MaterialPtr<2>>> builtin_materials() {
  return {
      {"neo_hookean_thermal", neo_hookean_thermal<2>(1.0, 0.5, 1.0, bounded_expansion(0.05, 1.0))},
      {"neo_hookean_multiplicative", neo_hookean_multiplicative<2>(1.0, 0.5, 1.0, bounded_expansion(0.05, 1.0))},
      {"sma_two_phase", sma_two_phase<2>({1.0, 0.5, 0.0}, {1.2, 0.3, 0.05}, 1.0, logistic_ramp(1.0, 0.1))},
      {"volumetric_pt", volumetric_pt<2>(1.0, 0.5, {{0.8, 0.1}, {1.3, -0.05}}, 0.05, 1.0)},
  };
}

struct CertifyResult {
  int checks = 0;
  int failures = 0;
  std::string first_failure;
};

inline Eigen::VectorXd vec(const Mat2& A) { return Eigen::Map<const Eigen::VectorXd>(A.data(), 4); }
inline Mat2 unvec(const Eigen::VectorXd& x) { return Eigen::Map<const Mat2>(x.data()); }

// Central-difference certification of every analytic derivative of a
// material at n random admissible states (both temperature branches).
inline CertifyResult certify_material(const Material<2>& m, int n, std::uint64_t seed) {
  const std::vector<double> hs = {1e-3, 5e-4, 2.5e-4, 1.25e-4};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SampleBox box;
  CertifyResult res;
  auto record = [&](const oracles::FdReport& r, const std::string& what, int s) {
    ++res.checks;
    if (!r.passed) {
      ++res.failures;
      if (res.first_failure.empty())
        res.first_failure = what + " at sample " + std::to_string(s) + " (order " +
                            std::to_string(r.observed_order) + ")";
    }
  };
  for (int s = 0; s < n; ++s) {
    const Mat2 F = sample_deformation<2>(rng, box);
    // every fourth sample exercises the negative-temperature extension
    const double th = s % 4 == 3 ? -(0.1 + 1.9 * u(rng)) : 0.1 + 1.9 * u(rng);
    const Eigen::VectorXd x = vec(F);
    Eigen::VectorXd t1(1);
    t1 << th;
    const double J = det<2, double>(F);

    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.phi(unvec(y)); }, vec(m.phi_F(F)),
                                      x, hs),
           "phi_F", s);
    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.gamma(unvec(y), th); },
                                      vec(m.gamma_F(F, th)), x, hs),
           "gamma_F", s);
    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.gamma(F, y(0)); },
                                      Eigen::VectorXd::Constant(1, m.gamma_theta(F, th)), t1, hs),
           "gamma_theta", s);
    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.gamma_theta(F, y(0)); },
                                      Eigen::VectorXd::Constant(1, m.gamma_thetatheta(F, th)), t1, hs),
           "gamma_thetatheta", s);
    record(oracles::fd_jacobian_check([&](const Eigen::VectorXd& y) { return vec(m.gamma_F(F, y(0))); },
                                      vec(m.gamma_Ftheta(F, th)), t1, hs),
           "gamma_Ftheta", s);
    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.enthalpy(F, y(0)); },
                                      Eigen::VectorXd::Constant(1, m.heat_capacity(F, th)), t1, hs),
           "heat_capacity", s);
    record(oracles::fd_gradient_check([&](const Eigen::VectorXd& y) { return m.psi(F, y(0)); },
                                      Eigen::VectorXd::Constant(1, -m.entropy(F, th) * J), t1, hs),
           "entropy", s);
    // ω = (γ - θγ_θ)/det F is algebraic, checked directly
    ++res.checks;
    const double w = (m.gamma(F, th) - th * m.gamma_theta(F, th)) / J;
    if (std::abs(w - m.enthalpy(F, th)) > 1e-12 * (1.0 + std::abs(w))) {
      ++res.failures;
      if (res.first_failure.empty()) res.first_failure = "enthalpy identity at sample " + std::to_string(s);
    }
  }
  return res;
}

}  // namespace ekv::testing
