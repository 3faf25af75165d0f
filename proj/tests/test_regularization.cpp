#include "ekv/errors.hpp"
#include "ekv/oracles.hpp"
#include "ekv/regularization.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ekv;
using testing::unvec;
using testing::vec;

namespace {
Mat2 diag(double a, double b) {
  Mat2 F = Mat2::Zero();
  F(0, 0) = a;
  F(1, 1) = b;
  return F;
}
}  // namespace

TEST_CASE("cut-off values at the corner cases") {
  const double lam = 0.2;
  const double a = std::sqrt(0.5 * (25.0 + std::sqrt(625.0 - 4.0 * lam * lam)));
  CHECK(pi_lambda<2>(diag(a, lam / a), lam).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pi_lambda<2>(diag(lam / 2, 1.0), lam).value == 0.0);
  CHECK(pi_lambda<2>(diag(0.6 * 2 / lam, 0.8 * 2 / lam), lam).value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pi_lambda<2>(diag(0.75 * lam, 1.0), lam).value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pi_lambda<2>(Mat2::Identity(), lam).value == 1.0);
  CHECK(pi_lambda<2>(Mat2::Identity(), lam).grad.norm() == 0.0);
}

TEST_CASE("cut-off gradient matches differences in the transition band") {
  const double lam = 0.3;
  for (const Mat2& F : {diag(0.25, 1.0), Mat2(diag(2.5, 2.4)), Mat2(0.5 * Mat2::Identity())}) {
    auto f = [&](const Eigen::VectorXd& y) { return pi_lambda<2>(unvec(y), lam).value; };
    CHECK(oracles::fd_gradient_check(f, vec(pi_lambda<2>(F, lam).grad), vec(F), {1e-4, 5e-5, 2.5e-5}).passed);
  }
}

TEST_CASE("regularized stress is the plain stress in the safe region") {
  const auto m = neo_hookean_thermal<2>(1.0, 0.5, 1.0, bounded_expansion(0.05, 1.0));
  RegularizationParams rp;
  std::mt19937_64 rng(41);
  for (int s = 0; s < 50; ++s) {
    const Mat2 F = sample_deformation<2>(rng, SampleBox{});
    REQUIRE(in_safe_region<2>(F, rp.lambda));
    const Mat2 a = regularized_stress<2>(*m, F, 0.7, rp), b = cauchy_stress<2>(*m, F, 0.7);
    CHECK(a == b);
  }
  rp.epsilon = 0.1;
  const Mat2 F = 1.2 * Mat2::Identity();
  CHECK(regularized_stress<2>(*m, F, 0.7, rp) != cauchy_stress<2>(*m, F, 0.7));
}

TEST_CASE("regularized stress outside the safe region differentiates the cut energy") {
  const auto m = neo_hookean_thermal<2>(1.0, 0.5, 1.0, bounded_expansion(0.05, 1.0));
  RegularizationParams rp;
  rp.lambda = 0.5;
  const double th = 0.8;
  const Mat2 F = diag(0.8, 0.45);  // det = 0.36 in (λ/2, λ)
  REQUIRE_FALSE(in_safe_region<2>(F, rp.lambda));
  const double J = F.determinant();
  const Mat2 T = regularized_stress<2>(*m, F, th, rp);
  // T det F F^{-T} = ∂(π φ)/∂F + π γ_F
  const Mat2 P = T * J * F.inverse().transpose() - pi_lambda<2>(F, rp.lambda).value * m->gamma_F(F, th);
  auto f = [&](const Eigen::VectorXd& y) { return pi_lambda<2>(unvec(y), rp.lambda).value * m->phi(unvec(y)); };
  CHECK(oracles::fd_gradient_check(f, vec(P), vec(F), {1e-4, 5e-5, 2.5e-5}).passed);
  CHECK(regularized_stress<2>(*m, diag(0.5, 0.5), th, rp).norm() == 0.0);
  CHECK(regularized_stored_energy<2>(*m, diag(0.5, 0.5), rp.lambda) == 0.0);
}

TEST_CASE("hyper-stress is the gradient of the p-power") {
  const double nu = 0.3, p = 3.0;
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(8);
  for (int i = 0; i < 8; ++i) x(i) = u(rng);
  auto ten = [](const Eigen::VectorXd& y) {
    Ten3<2> G;
    for (int k = 0; k < 2; ++k) G.slice[k] = Eigen::Map<const Mat2>(y.data() + 4 * k);
    return G;
  };
  const Ten3<2> H = hyper_stress<2>(ten(x), nu, p);
  Eigen::VectorXd g(8);
  for (int k = 0; k < 2; ++k) g.segment(4 * k, 4) = vec(H.slice[k]);
  auto f = [&](const Eigen::VectorXd& y) { return nu / p * std::pow(frobenius<2, double>(ten(y)), p); };
  CHECK(oracles::fd_gradient_check(f, g, x).passed);
  CHECK(frobenius<2, double>(hyper_stress<2>(Ten3<2>::Zero(), nu, p)) == 0.0);
}

TEST_CASE("damped sources approach the undamped ones at first order") {
  DissipationLaw law;
  Mat2 e;
  e << 0.8, 0.3, 0.3, -0.5;
  Ten3<2> G;
  G.slice[0] << 1.0, 0.2, 0.2, 0.5;
  G.slice[1] << -0.3, 0.4, 0.4, 0.1;
  const Mat2 D = law.stress<2>(e);
  RegularizationParams rp;
  const double xi = damped_heat_source<2>(D, e, G, rp);
  std::vector<double> errs;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    rp.epsilon = eps;
    errs.push_back(std::abs(damped_heat_source<2>(D, e, G, rp) - xi));
  }
  CHECK(std::log10(errs[0] / errs[1]) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::log10(errs[1] / errs[2]) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(damped_flux(2.0, 0.0) == 2.0);
  CHECK(damped_flux(-2.0, 0.5) == doctest::Approx(-1.0));
  rp.epsilon = 0.0;
  rp.nu_flat = 1.0;
  CHECK(regularized_boundary_flux<2>(0.5, Vec2(1.0, 1.0), rp) == doctest::Approx(1.5));
}

TEST_CASE("initial temperature mollification and det_lambda") {
  CHECK(mollified_initial_temperature(2.0, 0.0) == 2.0);
  CHECK(mollified_initial_temperature(2.0, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mollified_initial_temperature(-1e-3, 0.0), Error);
  CHECK(det_lambda(0.01, 0.1) == 0.05);
  CHECK(det_lambda(30.0, 0.1) == 20.0);
  CHECK(det_lambda(1.3, 0.1) == 1.3);
}
