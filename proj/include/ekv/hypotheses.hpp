#pragma once

#include "ekv/materials.hpp"

#include <random>
#include <string>
#include <vector>

namespace ekv {

// Sampling region for (F, θ): det F in [J_min, J_max], principal stretch
// ratio at most `anisotropy`, θ in [theta_min, theta_max].
struct SampleBox {
  double J_min = 0.5, J_max = 2.0;
  double anisotropy = 2.0;
  double theta_min = 0.1, theta_max = 2.0;
  double e_max = 10.0;  // range for strain-rate samples
};

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;     // largest violation measure seen (<= 0 means satisfied)
  double constant = 0.0;  // fitted constant, where the check has one
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const HypothesisCheck& operator[](const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw Error(ErrorKind::UsageError, "no hypothesis check named " + name);
  }
};

template <int Dim>
Mat<Dim> sample_deformation(std::mt19937_64& rng, const SampleBox& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double J = box.J_min + (box.J_max - box.J_min) * u(rng);
  const double la = std::log(box.anisotropy);
  Vec<Dim> s;
  double sum = 0.0;
  for (int i = 0; i < Dim; ++i) {
    s(i) = la * (u(rng) - 0.5);
    sum += s(i);
  }
  Mat<Dim> S = Mat<Dim>::Zero();
  for (int i = 0; i < Dim; ++i) S(i, i) = std::exp(s(i) - sum / Dim) * std::pow(J, 1.0 / Dim);
  return random_rotation<Dim>(rng) * S * random_rotation<Dim>(rng);
}

template <int Dim>
Mat<Dim> sample_symmetric(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat<Dim> A;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) A(i, j) = u(rng);
  // log-uniform magnitude spreads samples over small and large rates
  const double mag = scale * std::pow(10.0, -3.0 * (0.5 * (u(rng) + 1.0)));
  const Mat<Dim> S = sym<Dim, double>(A);
  return mag * S / std::max(S.norm(), 1e-300);
}

// Samples the standing hypotheses on the free energy and the dissipative
// stress.  delta <= 0 selects the dissipation law's own δ.  The coupling-stress
// growth bound is probed on the box and on a ladder of temperatures doubling
// past theta_max; a bound that keeps growing along the ladder fails.
template <int Dim>
HypothesisReport validate_hypotheses(const Material<Dim>& m, const SampleBox& box, int n_samples,
                                     double delta = -1.0, std::uint64_t seed = 1) {
  if (n_samples <= 0 || box.J_min <= 0.0 || box.J_min > box.J_max || box.theta_min < 0.0 ||
      box.theta_min > box.theta_max || box.anisotropy < 1.0)
    throw Error(ErrorKind::UsageError, "validate_hypotheses: empty or invalid sample box");
  const DissipationLaw& law = m.dissipation();
  if (delta <= 0.0) delta = law.delta();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto theta_sample = [&] {
    return std::max(box.theta_min, 1e-8) + (box.theta_max - std::max(box.theta_min, 1e-8)) * u(rng);
  };
  HypothesisReport rep;

  {  // heat capacity: (γ_θ(θ) - γ_θ(θ̃))/(θ - θ̃) <= -δ/det F
    HypothesisCheck c;
    c.name = "heat_capacity";
    c.worst = -1e300;
    for (int s = 0; s < n_samples; ++s) {
      const Mat<Dim> F = sample_deformation<Dim>(rng, box);
      double t1 = theta_sample(), t2 = theta_sample();
      if (std::abs(t1 - t2) < 1e-6 * box.theta_max) t2 = t1 + 1e-3 * (box.theta_max - box.theta_min + 1.0);
      const double J = det<Dim, double>(F);
      const double dq = (m.gamma_theta(F, t1) - m.gamma_theta(F, t2)) / (t1 - t2);
      const double v = (dq + delta / J) * J / delta;
      if (v > c.worst) {
        c.worst = v;
        c.detail = "theta=" + std::to_string(t1) + "," + std::to_string(t2) + " detF=" + std::to_string(J);
      }
    }
    c.passed = c.worst <= 1e-12;
    rep.checks.push_back(c);
  }

  {  // |γ_F' Fᵀ/det F| <= C (1 + (φ + θ)/det F)
    HypothesisCheck c;
    c.name = "coupling_growth";
    auto ratio = [&](const Mat<Dim>& F, double t) {
      const double J = det<Dim, double>(F);
      const double lhs = coupling_stress<Dim>(m, F, t).norm();
      const double rhs = 1.0 + (m.phi(F) + t) / J;
      return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
    };
    double C_box = 0.0;
    std::vector<Mat<Dim>> Fs;
    for (int s = 0; s < n_samples; ++s) {
      Fs.push_back(sample_deformation<Dim>(rng, box));
      C_box = std::max(C_box, ratio(Fs.back(), theta_sample()));
    }
    double C_top = 0.0;
    const int rungs = 10;
    for (const auto& F : Fs) C_top = std::max(C_top, ratio(F, box.theta_max * std::ldexp(1.0, rungs)));
    c.constant = C_box;
    c.worst = C_box > 0.0 ? C_top / C_box : (C_top > 0.0 ? 1e300 : 0.0);
    c.passed = std::isfinite(C_box) && c.worst <= 2.0;
    c.detail = "C_box=" + std::to_string(C_box) + " C_ladder=" + std::to_string(C_top);
    rep.checks.push_back(c);
  }

  {  // (D(e) - D(ẽ)):(e - ẽ) >= δ|e - ẽ|^q
    HypothesisCheck c;
    c.name = "dissipation_monotone";
    c.worst = -1e300;
    for (int s = 0; s < n_samples; ++s) {
      const Mat<Dim> F = sample_deformation<Dim>(rng, box);
      const double t = theta_sample();
      const Mat<Dim> e1 = sample_symmetric<Dim>(rng, box.e_max), e2 = sample_symmetric<Dim>(rng, box.e_max);
      const Mat<Dim> de = e1 - e2;
      const double lhs = contract<Dim, double>(m.dissipative_stress(F, t, e1) - m.dissipative_stress(F, t, e2), de);
      const double rhs = delta * std::pow(de.norm(), law.q);
      const double v = (rhs - lhs) / std::max(rhs, 1e-300);
      c.worst = std::max(c.worst, v);
    }
    c.passed = c.worst <= 1e-12;
    rep.checks.push_back(c);
  }

  {  // |D(e)| <= (1 + |e|^{q-1})/δ and D(0) = 0
    HypothesisCheck c;
    c.name = "dissipation_growth";
    c.worst = -1e300;
    for (int s = 0; s < n_samples; ++s) {
      const Mat<Dim> F = sample_deformation<Dim>(rng, box);
      const Mat<Dim> e = sample_symmetric<Dim>(rng, box.e_max);
      const double bound = (1.0 + std::pow(e.norm(), law.q - 1.0)) / delta;
      c.worst = std::max(c.worst, m.dissipative_stress(F, theta_sample(), e).norm() / bound - 1.0);
    }
    const double d0 = m.dissipative_stress(Mat<Dim>::Identity(), box.theta_max, Mat<Dim>::Zero()).norm();
    c.passed = c.worst <= 1e-12 && d0 == 0.0;
    rep.checks.push_back(c);
  }

  {  // ψ(QF,θ) = ψ(F,θ), T(QF) = Q T(F) Qᵀ
    HypothesisCheck c;
    c.name = "frame_indifference";
    for (int s = 0; s < n_samples; ++s) {
      const Mat<Dim> F = sample_deformation<Dim>(rng, box);
      const double t = theta_sample();
      const Mat<Dim> Q = random_rotation<Dim>(rng);
      const double p = m.psi(F, t), pq = m.psi(Q * F, t);
      const Mat<Dim> T = cauchy_stress<Dim>(m, F, t), TQ = cauchy_stress<Dim>(m, Q * F, t);
      const double e1 = std::abs(pq - p) / std::max(1.0, std::abs(p));
      const double e2 = (TQ - Q * T * Q.transpose()).norm() / std::max(1.0, T.norm());
      c.worst = std::max({c.worst, e1, e2});
    }
    c.passed = c.worst <= 1e-10;
    rep.checks.push_back(c);
  }

  {  // T = Tᵀ
    HypothesisCheck c;
    c.name = "stress_symmetry";
    for (int s = 0; s < n_samples; ++s) {
      const Mat<Dim> F = sample_deformation<Dim>(rng, box);
      const Mat<Dim> T = cauchy_stress<Dim>(m, F, theta_sample());
      c.worst = std::max(c.worst, (T - T.transpose()).norm() / std::max(1.0, T.norm()));
    }
    c.passed = c.worst <= 1e-10;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace ekv
