#pragma once

#include "ekv/materials.hpp"

#include <algorithm>
#include <cmath>

namespace ekv {

struct RegularizationParams {
  double lambda = 0.05;   // cut-off threshold, in (0,1)
  double epsilon = 0.0;   // damping of heat sources and the initial temperature
  double nu = 1e-4;       // hyper-viscosity
  double nu_flat = 0.0;   // boundary viscosity ν_♭
  double p = 3.0;         // hyper-viscosity exponent, p > d
  double q = 3.0;         // dissipation exponent, q > d
};

template <int Dim>
struct CutOff {
  double value;
  Mat<Dim> grad;  // ∂π_λ/∂F
};

// π_λ(F) = s(u) (1 - s(t)) with u = (2 det F - λ)/λ, t = λ|F| - 1 and
// s(x) = 3x² - 2x³ clamped to [0,1].  Equals 1 on {det F >= λ, |F| <= 1/λ}
// and 0 on {det F <= λ/2} ∪ {|F| >= 2/λ}.
template <int Dim>
CutOff<Dim> pi_lambda(const Mat<Dim>& F, double lambda) {
  const double J = det<Dim, double>(F);
  const double n = F.norm();
  const double u = (2.0 * J - lambda) / lambda;
  const double t = lambda * n - 1.0;
  const double a = smoothstep(u), b = 1.0 - smoothstep(t);
  CutOff<Dim> c;
  c.value = a * b;
  c.grad = Mat<Dim>::Zero();
  const double da = smoothstep_d(u) * 2.0 / lambda;
  const double db = -smoothstep_d(t) * lambda;
  if (da != 0.0) c.grad += da * b * cof<Dim, double>(F);
  if (db != 0.0 && n > 0.0) c.grad += a * db * F / n;
  return c;
}

template <int Dim>
bool in_safe_region(const Mat<Dim>& F, double lambda) {
  return det<Dim, double>(F) >= lambda && F.norm() <= 1.0 / lambda;
}

inline double det_lambda(double J, double lambda) {
  return std::clamp(J, 0.5 * lambda, 2.0 / lambda);
}

template <int Dim>
double det_lambda(const Mat<Dim>& F, double lambda) {
  return det_lambda(det<Dim, double>(F), lambda);
}

// T_{λ,ε} = ([π_λ φ]' + π_λ γ_F'/(1 + ε|θ|)) Fᵀ / det F, zero where det F <= λ/2.
// In the safe region it is evaluated on the same path as the plain stress.
template <int Dim>
Mat<Dim> regularized_stress(const Material<Dim>& m, const Mat<Dim>& F, double theta,
                            const RegularizationParams& rp) {
  const double J = det<Dim, double>(F);
  if (J <= 0.5 * rp.lambda) return Mat<Dim>::Zero();
  const double damp = 1.0 + rp.epsilon * std::abs(theta);
  if (in_safe_region<Dim>(F, rp.lambda))
    return (m.phi_F(F) + m.gamma_F(F, theta) / damp) * F.transpose() / J;
  const CutOff<Dim> pi = pi_lambda<Dim>(F, rp.lambda);
  if (pi.value == 0.0 && pi.grad.isZero(0.0)) return Mat<Dim>::Zero();
  // [π_λ φ]' = π_λ φ' + φ ∂π_λ/∂F
  const Mat<Dim> dphi = pi.value * m.phi_F(F) + m.phi(F) * pi.grad;
  return (dphi + pi.value * m.gamma_F(F, theta) / damp) * F.transpose() / J;
}

// π_λ γ_F' Fᵀ / ((1 + ε|θ|) det F) : e
template <int Dim>
double regularized_adiabatic_source(const Material<Dim>& m, const Mat<Dim>& F, double theta,
                                    const Mat<Dim>& e, const RegularizationParams& rp) {
  const double J = det<Dim, double>(F);
  if (J <= 0.5 * rp.lambda) return 0.0;
  const double pi = pi_lambda<Dim>(F, rp.lambda).value;
  if (pi == 0.0) return 0.0;
  const Mat<Dim> S = m.gamma_F(F, theta) * F.transpose() / J;
  return pi / (1.0 + rp.epsilon * std::abs(theta)) * contract<Dim, double>(S, e);
}

// π_λ φ / det F, the stored energy density seen by the regularized balance
template <int Dim>
double regularized_stored_energy(const Material<Dim>& m, const Mat<Dim>& F, double lambda) {
  const double J = det<Dim, double>(F);
  if (J <= 0.5 * lambda) return 0.0;
  const double pi = pi_lambda<Dim>(F, lambda).value;
  return pi == 0.0 ? 0.0 : pi * m.phi(F) / J;
}

// ν |∇e|^{p-2} ∇e
template <int Dim>
Ten3<Dim> hyper_stress(const Ten3<Dim>& G, double nu, double p) {
  const double n = frobenius<Dim, double>(G);
  if (n == 0.0) return Ten3<Dim>::Zero();
  return (nu * std::pow(n, p - 2.0)) * G;
}

// (D:e + ν|∇e|^p) / (1 + ε|e|^q + ε|∇e|^p)
template <int Dim>
double damped_heat_source(const Mat<Dim>& D, const Mat<Dim>& e, const Ten3<Dim>& G,
                          const RegularizationParams& rp) {
  const double gp = std::pow(frobenius<Dim, double>(G), rp.p);
  const double xi = contract<Dim, double>(D, e) + rp.nu * gp;
  if (rp.epsilon == 0.0) return xi;
  return xi / (1.0 + rp.epsilon * std::pow(e.norm(), rp.q) + rp.epsilon * gp);
}

// h/(1 + ε|h|)
inline double damped_flux(double h, double epsilon) { return h / (1.0 + epsilon * std::abs(h)); }

// h_ε(θ) + ν_♭|v|²/(2 + ε|v|²): heat entering through the boundary
template <int Dim>
double regularized_boundary_flux(double h_of_theta, const Vec<Dim>& v, const RegularizationParams& rp) {
  const double v2 = v.squaredNorm();
  return damped_flux(h_of_theta, rp.epsilon) + rp.nu_flat * v2 / (2.0 + rp.epsilon * v2);
}

inline double mollified_initial_temperature(double theta0, double epsilon) {
  if (theta0 < 0.0)
    throw Error(ErrorKind::NegativeInitialTemperature, "initial temperature must be non-negative");
  return theta0 / (1.0 + epsilon * theta0);
}

}  // namespace ekv
