#pragma once

#include "ekv/errors.hpp"
#include "ekv/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace ekv {

// Scalar function of temperature with two derivatives, used for the
// thermal expansion α(θ) and the phase ramp λ(θ).
struct ScalarLaw {
  std::function<double(double)> f, d1, d2;
};

// α_max θ² / (θ₀² + θ²): increasing, bounded, α(0) = α'(0) = 0.
inline ScalarLaw bounded_expansion(double alpha_max, double theta0) {
  const double t2 = theta0 * theta0;
  return {[=](double t) { return alpha_max * t * t / (t2 + t * t); },
          [=](double t) {
            const double s = t2 + t * t;
            return 2.0 * alpha_max * t2 * t / (s * s);
          },
          [=](double t) {
            const double s = t2 + t * t;
            return 2.0 * alpha_max * t2 * (t2 - 3.0 * t * t) / (s * s * s);
          }};
}

// a θ²: convex and unbounded.
inline ScalarLaw quadratic_expansion(double a) {
  return {[=](double t) { return a * t * t; }, [=](double t) { return 2.0 * a * t; },
          [=](double) { return 2.0 * a; }};
}

inline ScalarLaw zero_law() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

// Logistic ramp shifted so that λ(0) = 0 and λ(∞) = 1.
inline ScalarLaw logistic_ramp(double theta_c, double width) {
  const double L0 = 1.0 / (1.0 + std::exp(theta_c / width));
  const double scale = 1.0 / (1.0 - L0);
  auto L = [=](double t) { return 1.0 / (1.0 + std::exp(-(t - theta_c) / width)); };
  return {[=](double t) { return scale * (L(t) - L0); },
          [=](double t) {
            const double l = L(t);
            return scale * l * (1.0 - l) / width;
          },
          [=](double t) {
            const double l = L(t);
            return scale * l * (1.0 - l) * (1.0 - 2.0 * l) / (width * width);
          }};
}

// D(e) = μ₁ e + μ_q |e|^{q-2} e
struct DissipationLaw {
  double mu1 = 0.01;
  double muq = 0.001;
  double q = 3.0;

  template <int Dim>
  Mat<Dim> stress(const Mat<Dim>& e) const {
    const double n = e.norm();
    const double w = n > 0.0 ? muq * std::pow(n, q - 2.0) : 0.0;
    return (mu1 + w) * e;
  }

  // Largest δ for which monotonicity and growth hold for this law.
  double delta() const {
    return std::min({mu1, std::pow(2.0, 2.0 - q) * muq, 1.0 / (mu1 + muq)});
  }
};

namespace detail {
// θ ln θ with the continuous extension 0 at θ = 0.
inline double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

template <int Dim>
double neo_hookean_phi(const Mat<Dim>& F, double K, double G) {
  const double J = det<Dim, double>(F);
  const double Jm = std::pow(J, -2.0 / Dim);
  return 0.5 * K * (J - 1.0) * (J - 1.0) + 0.5 * G * (F.squaredNorm() * Jm - Dim);
}

template <int Dim>
Mat<Dim> neo_hookean_phi_F(const Mat<Dim>& F, double K, double G) {
  const double J = det<Dim, double>(F);
  const double Jm = std::pow(J, -2.0 / Dim);
  const Mat<Dim> C = cof<Dim, double>(F);
  return K * (J - 1.0) * C + G * Jm * (F - (F.squaredNorm() / (Dim * J)) * C);
}
}  // namespace detail

// Free energy ψ(F,θ) = φ(F) + γ(F,θ) with γ(F,0) = 0.  Subclasses supply the
// θ ≥ 0 branch; for θ < 0 the thermal part is replaced by θ(1 - ln(-θ)), so
// ω = θ/det F and γ_F' = 0 there, and κ, D see |θ|.
template <int Dim>
class Material {
 public:
  using MatD = Mat<Dim>;

  Material(std::string name, double kappa, DissipationLaw law)
      : name_(std::move(name)), kappa_(kappa), law_(law) {}
  virtual ~Material() = default;

  const std::string& name() const { return name_; }
  const DissipationLaw& dissipation() const { return law_; }

  double phi(const MatD& F) const { return phi_(F); }
  MatD phi_F(const MatD& F) const { return phi_F_(F); }

  double gamma(const MatD& F, double t) const {
    return t >= 0.0 ? gamma_(F, t) : t + detail::xlogx(-t);
  }
  MatD gamma_F(const MatD& F, double t) const { return t >= 0.0 ? gamma_F_(F, t) : MatD::Zero(); }
  double gamma_theta(const MatD& F, double t) const {
    return t >= 0.0 ? gamma_t_(F, t) : -std::log(-t);
  }
  double gamma_thetatheta(const MatD& F, double t) const {
    return t >= 0.0 ? gamma_tt_(F, t) : -1.0 / t;
  }
  MatD gamma_Ftheta(const MatD& F, double t) const {
    return t >= 0.0 ? gamma_Ft_(F, t) : MatD::Zero();
  }

  double psi(const MatD& F, double t) const { return phi(F) + gamma(F, t); }
  MatD psi_F(const MatD& F, double t) const { return phi_F(F) + gamma_F(F, t); }

  // ω = (γ - θγ_θ')/det F
  double enthalpy(const MatD& F, double t) const {
    return t >= 0.0 ? omega_(F, t) : t / det<Dim, double>(F);
  }
  // c = -θψ_θθ''/det F = ω_θ'
  double heat_capacity(const MatD& F, double t) const {
    return t >= 0.0 ? capacity_(F, t) : 1.0 / det<Dim, double>(F);
  }
  // η = -ψ_θ'/det F
  double entropy(const MatD& F, double t) const {
    return -gamma_theta(F, t) / det<Dim, double>(F);
  }

  double kappa(const MatD&, double) const { return kappa_; }

  MatD dissipative_stress(const MatD&, double, const MatD& e) const {
    return law_.template stress<Dim>(e);
  }

 protected:
  virtual double phi_(const MatD& F) const = 0;
  virtual MatD phi_F_(const MatD& F) const = 0;
  virtual double gamma_(const MatD& F, double t) const = 0;
  virtual MatD gamma_F_(const MatD& F, double t) const = 0;
  virtual double gamma_t_(const MatD& F, double t) const = 0;
  virtual double gamma_tt_(const MatD& F, double t) const = 0;
  virtual MatD gamma_Ft_(const MatD& F, double t) const = 0;
  virtual double omega_(const MatD& F, double t) const = 0;
  virtual double capacity_(const MatD& F, double t) const = 0;

 private:
  std::string name_;
  double kappa_;
  DissipationLaw law_;
};

template <int Dim>
using MaterialPtr = std::shared_ptr<const Material<Dim>>;

// ψ = ½K(J-1)² + ½G(|F|²/J^{2/d} - d) + c₀θ(1 - ln θ) - K α(θ) J
template <int Dim>
class NeoHookeanThermal : public Material<Dim> {
 public:
  using MatD = Mat<Dim>;
  NeoHookeanThermal(double K, double G, double c0, ScalarLaw alpha, double kappa, DissipationLaw law)
      : Material<Dim>("neo_hookean_thermal", kappa, law), K_(K), G_(G), c0_(c0), a_(std::move(alpha)) {}

 protected:
  double phi_(const MatD& F) const override { return detail::neo_hookean_phi<Dim>(F, K_, G_); }
  MatD phi_F_(const MatD& F) const override { return detail::neo_hookean_phi_F<Dim>(F, K_, G_); }
  double gamma_(const MatD& F, double t) const override {
    return c0_ * (t - detail::xlogx(t)) - K_ * a_.f(t) * det<Dim, double>(F);
  }
  MatD gamma_F_(const MatD& F, double t) const override { return -K_ * a_.f(t) * cof<Dim, double>(F); }
  double gamma_t_(const MatD& F, double t) const override {
    return -c0_ * std::log(t) - K_ * a_.d1(t) * det<Dim, double>(F);
  }
  double gamma_tt_(const MatD& F, double t) const override {
    return -c0_ / t - K_ * a_.d2(t) * det<Dim, double>(F);
  }
  MatD gamma_Ft_(const MatD& F, double t) const override { return -K_ * a_.d1(t) * cof<Dim, double>(F); }
  double omega_(const MatD& F, double t) const override {
    return c0_ * t / det<Dim, double>(F) - K_ * (a_.f(t) - t * a_.d1(t));
  }
  double capacity_(const MatD& F, double t) const override {
    return c0_ / det<Dim, double>(F) + t * K_ * a_.d2(t);
  }

 private:
  double K_, G_, c0_;
  ScalarLaw a_;
};

// Multiplicative split F = F_el (1+α) I:
// ψ = ½K(J/(1+α)^d - 1)² + ½G(|F|²/J^{2/d} - d) + c₀θ(1 - ln θ).
// With a = (1+α)^d, γ = thermal - K J² (a²-1)/(2a²) + K J (a-1)/a.
template <int Dim>
class NeoHookeanMultiplicative : public Material<Dim> {
 public:
  using MatD = Mat<Dim>;
  NeoHookeanMultiplicative(double K, double G, double c0, ScalarLaw alpha, double kappa,
                           DissipationLaw law)
      : Material<Dim>("neo_hookean_multiplicative", kappa, law),
        K_(K), G_(G), c0_(c0), a_(std::move(alpha)) {}

 protected:
  // s1 = ½(1 - a⁻²), s2 = 1 - a⁻¹ and their θ-derivatives.
  struct S {
    double s1, s2, s1d, s2d, s1dd, s2dd;
  };
  S coeffs(double t) const {
    const double al = a_.f(t), al1 = a_.d1(t), al2 = a_.d2(t);
    const double a = std::pow(1.0 + al, Dim);
    const double ad = Dim * std::pow(1.0 + al, Dim - 1) * al1;
    const double add = Dim * (Dim - 1) * std::pow(1.0 + al, Dim - 2) * al1 * al1 +
                       Dim * std::pow(1.0 + al, Dim - 1) * al2;
    S s;
    s.s1 = 0.5 * (1.0 - 1.0 / (a * a));
    s.s2 = 1.0 - 1.0 / a;
    s.s1d = ad / (a * a * a);
    s.s2d = ad / (a * a);
    s.s1dd = -3.0 * ad * ad / (a * a * a * a) + add / (a * a * a);
    s.s2dd = -2.0 * ad * ad / (a * a * a) + add / (a * a);
    return s;
  }
  double phi_(const MatD& F) const override { return detail::neo_hookean_phi<Dim>(F, K_, G_); }
  MatD phi_F_(const MatD& F) const override { return detail::neo_hookean_phi_F<Dim>(F, K_, G_); }
  double gamma_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return c0_ * (t - detail::xlogx(t)) - K_ * s.s1 * J * J + K_ * s.s2 * J;
  }
  MatD gamma_F_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return (-2.0 * K_ * s.s1 * J + K_ * s.s2) * cof<Dim, double>(F);
  }
  double gamma_t_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return -c0_ * std::log(t) - K_ * s.s1d * J * J + K_ * s.s2d * J;
  }
  double gamma_tt_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return -c0_ / t - K_ * s.s1dd * J * J + K_ * s.s2dd * J;
  }
  MatD gamma_Ft_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return (-2.0 * K_ * s.s1d * J + K_ * s.s2d) * cof<Dim, double>(F);
  }
  double omega_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return c0_ * t / J + K_ * (-(s.s1 - t * s.s1d) * J + (s.s2 - t * s.s2d));
  }
  double capacity_(const MatD& F, double t) const override {
    const S s = coeffs(t);
    const double J = det<Dim, double>(F);
    return c0_ / J + t * K_ * (s.s1dd * J - s.s2dd);
  }

 private:
  double K_, G_, c0_;
  ScalarLaw a_;
};

// Two-phase mixture ψ = φ_A + λ(θ)(φ_M - φ_A) + c₀θ(1 - ln θ), both phases
// neo-Hookean, the martensite shifted by a constant energy offset.
template <int Dim>
class SmaTwoPhase : public Material<Dim> {
 public:
  using MatD = Mat<Dim>;
  struct Phase {
    double K, G, offset = 0.0;
  };
  SmaTwoPhase(Phase A, Phase M, double c0, ScalarLaw ramp, double kappa, DissipationLaw law)
      : Material<Dim>("sma_two_phase", kappa, law), A_(A), M_(M), c0_(c0), l_(std::move(ramp)) {}

  double phi_MA(const MatD& F) const {
    return detail::neo_hookean_phi<Dim>(F, M_.K, M_.G) + M_.offset -
           detail::neo_hookean_phi<Dim>(F, A_.K, A_.G) - A_.offset;
  }
  MatD phi_MA_F(const MatD& F) const {
    return detail::neo_hookean_phi_F<Dim>(F, M_.K, M_.G) - detail::neo_hookean_phi_F<Dim>(F, A_.K, A_.G);
  }
  const ScalarLaw& ramp() const { return l_; }

 protected:
  double phi_(const MatD& F) const override {
    return detail::neo_hookean_phi<Dim>(F, A_.K, A_.G) + A_.offset;
  }
  MatD phi_F_(const MatD& F) const override { return detail::neo_hookean_phi_F<Dim>(F, A_.K, A_.G); }
  double gamma_(const MatD& F, double t) const override {
    return l_.f(t) * phi_MA(F) + c0_ * (t - detail::xlogx(t));
  }
  MatD gamma_F_(const MatD& F, double t) const override { return l_.f(t) * phi_MA_F(F); }
  double gamma_t_(const MatD& F, double t) const override {
    return l_.d1(t) * phi_MA(F) - c0_ * std::log(t);
  }
  double gamma_tt_(const MatD& F, double t) const override {
    return l_.d2(t) * phi_MA(F) - c0_ / t;
  }
  MatD gamma_Ft_(const MatD& F, double t) const override { return l_.d1(t) * phi_MA_F(F); }
  double omega_(const MatD& F, double t) const override {
    return ((l_.f(t) - t * l_.d1(t)) * phi_MA(F) + c0_ * t) / det<Dim, double>(F);
  }
  double capacity_(const MatD& F, double t) const override {
    return (c0_ - t * l_.d2(t) * phi_MA(F)) / det<Dim, double>(F);
  }

 private:
  Phase A_, M_;
  double c0_;
  ScalarLaw l_;
};

// ψ = v(J) + ½G(|F|²/J^{2/d} - d) + c₀θ(1 - ln θ) with
// v(J) = ½K(J-1)² - Σ Δᵢ w softplus((J - Jᵢ)/w): the pressure v'(J) drops by
// Δᵢ across each transition volume Jᵢ.  No thermo-mechanical coupling.
template <int Dim>
class VolumetricPT : public Material<Dim> {
 public:
  using MatD = Mat<Dim>;
  struct Transition {
    double J, drop;
  };
  VolumetricPT(double K, double G, std::vector<Transition> transitions, double width, double c0,
               double kappa, DissipationLaw law)
      : Material<Dim>("volumetric_pt", kappa, law),
        K_(K), G_(G), tr_(std::move(transitions)), w_(width), c0_(c0) {}

  double v(double J) const {
    double s = 0.5 * K_ * (J - 1.0) * (J - 1.0);
    for (const auto& t : tr_) {
      const double x = (J - t.J) / w_;
      s -= t.drop * w_ * (x > 30.0 ? x : std::log1p(std::exp(x)));
    }
    return s;
  }
  double v_d(double J) const {
    double s = K_ * (J - 1.0);
    for (const auto& t : tr_) s -= t.drop / (1.0 + std::exp(-(J - t.J) / w_));
    return s;
  }

 protected:
  double phi_(const MatD& F) const override {
    const double J = det<Dim, double>(F);
    return v(J) + 0.5 * G_ * (F.squaredNorm() * std::pow(J, -2.0 / Dim) - Dim);
  }
  MatD phi_F_(const MatD& F) const override {
    const double J = det<Dim, double>(F);
    const MatD C = cof<Dim, double>(F);
    return v_d(J) * C + G_ * std::pow(J, -2.0 / Dim) * (F - (F.squaredNorm() / (Dim * J)) * C);
  }
  double gamma_(const MatD&, double t) const override { return c0_ * (t - detail::xlogx(t)); }
  MatD gamma_F_(const MatD&, double) const override { return MatD::Zero(); }
  double gamma_t_(const MatD&, double t) const override { return -c0_ * std::log(t); }
  double gamma_tt_(const MatD&, double t) const override { return -c0_ / t; }
  MatD gamma_Ft_(const MatD&, double) const override { return MatD::Zero(); }
  double omega_(const MatD& F, double t) const override { return c0_ * t / det<Dim, double>(F); }
  double capacity_(const MatD& F, double) const override { return c0_ / det<Dim, double>(F); }

 private:
  double K_, G_;
  std::vector<Transition> tr_;
  double w_, c0_;
};

template <int Dim>
MaterialPtr<Dim> neo_hookean_thermal(double K_e, double G_e, double c0, ScalarLaw alpha,
                                     double kappa = 0.01, DissipationLaw law = {}) {
  return std::make_shared<NeoHookeanThermal<Dim>>(K_e, G_e, c0, std::move(alpha), kappa, law);
}

template <int Dim>
MaterialPtr<Dim> neo_hookean_multiplicative(double K_e, double G_e, double c0, ScalarLaw alpha,
                                            double kappa = 0.01, DissipationLaw law = {}) {
  return std::make_shared<NeoHookeanMultiplicative<Dim>>(K_e, G_e, c0, std::move(alpha), kappa, law);
}

template <int Dim>
MaterialPtr<Dim> sma_two_phase(typename SmaTwoPhase<Dim>::Phase austenite,
                               typename SmaTwoPhase<Dim>::Phase martensite, double c0,
                               ScalarLaw ramp, double kappa = 0.01, DissipationLaw law = {}) {
  return std::make_shared<SmaTwoPhase<Dim>>(austenite, martensite, c0, std::move(ramp), kappa, law);
}

template <int Dim>
MaterialPtr<Dim> volumetric_pt(double K, double G_e,
                               std::vector<typename VolumetricPT<Dim>::Transition> transitions,
                               double width, double c0, double kappa = 0.01, DissipationLaw law = {}) {
  return std::make_shared<VolumetricPT<Dim>>(K, G_e, std::move(transitions), width, c0, kappa, law);
}

// T = ψ_F' Fᵀ / det F
template <int Dim>
Mat<Dim> cauchy_stress(const Material<Dim>& m, const Mat<Dim>& F, double theta) {
  const double J = det<Dim, double>(F);
  if (!(J > 0.0)) throw Error(ErrorKind::NonInvertibleDeformation, "cauchy_stress: det F <= 0");
  return (m.phi_F(F) + m.gamma_F(F, theta)) * F.transpose() / J;
}

// γ_F' Fᵀ / det F
template <int Dim>
Mat<Dim> coupling_stress(const Material<Dim>& m, const Mat<Dim>& F, double theta) {
  return m.gamma_F(F, theta) * F.transpose() / det<Dim, double>(F);
}

template <int Dim>
double entropy_density(const Material<Dim>& m, const Mat<Dim>& F, double theta) {
  return m.entropy(F, theta);
}

template <int Dim>
double enthalpy(const Material<Dim>& m, const Mat<Dim>& F, double theta) {
  return m.enthalpy(F, theta);
}

template <int Dim>
double heat_capacity(const Material<Dim>& m, const Mat<Dim>& F, double theta) {
  return m.heat_capacity(F, theta);
}

template <int Dim>
Mat<Dim> dissipative_stress(const Material<Dim>& m, const Mat<Dim>& F, double theta, const Mat<Dim>& e) {
  return m.dissipative_stress(F, theta, e);
}

// θ with ω(F,θ) = w.  Bracketed Newton; the bracket is expanded by doubling
// and sampled for c > 0 before the iteration starts.
template <int Dim>
double invert_enthalpy(const Material<Dim>& m, const Mat<Dim>& F, double w) {
  const double J = det<Dim, double>(F);
  if (w < 0.0) return w * J;
  if (w == 0.0) return 0.0;
  auto check = [&](double t) {
    const double c = m.heat_capacity(F, t);
    if (!(c > 0.0))
      throw Error(ErrorKind::NonMonotoneEnthalpy, "invert_enthalpy: heat capacity <= 0 at theta=" +
                                                      std::to_string(t));
    return c;
  };
  double lo = 0.0, hi = std::max(1.0, w * J);
  for (int i = 0; m.enthalpy(F, hi) < w; ++i) {
    check(hi);
    lo = hi;
    hi *= 2.0;
    if (i > 1100) throw Error(ErrorKind::NonMonotoneEnthalpy, "invert_enthalpy: no upper bracket");
  }
  // ω must increase over the whole bracket, otherwise the root is not unique
  for (int i = 1; i <= 64; ++i) check(hi * i / 64.0);
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = m.enthalpy(F, t) - w;
    if (std::abs(r) <= 1e-15 * std::max(1.0, std::abs(w))) return t;
    if (r > 0.0)
      hi = t;
    else
      lo = t;
    const double c = check(t);
    double tn = t - r / c;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return tn;
    t = tn;
  }
  return t;
}

}  // namespace ekv
