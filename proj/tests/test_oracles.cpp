#include "ekv/errors.hpp"
#include "ekv/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ekv;
using namespace ekv::oracles;

TEST_CASE("fd_gradient_check certifies a correct gradient and rejects a wrong one") {
  auto f = [](const Eigen::VectorXd& x) { return std::sin(x(0)) * std::exp(x(1)); };
  Eigen::VectorXd x(2);
  x << 0.3, -0.2;
  Eigen::VectorXd g(2);
  g << std::cos(0.3) * std::exp(-0.2), std::sin(0.3) * std::exp(-0.2);
  const FdReport ok = fd_gradient_check(f, g, x);
  CHECK(ok.passed);
  CHECK(ok.observed_order == doctest::Approx(2.0).epsilon(0.05));
  Eigen::VectorXd bad = g;
  bad(1) *= 1.01;
  CHECK_FALSE(fd_gradient_check(f, bad, x).passed);
}

TEST_CASE("fd_gradient_check of a constant is exact") {
  auto f = [](const Eigen::VectorXd&) { return 4.0; };
  const FdReport r = fd_gradient_check(f, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3));
  CHECK(r.passed);
  CHECK(r.exact);
}

TEST_CASE("richardson_order recovers classical orders on y' = -y") {
  Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  auto euler = [](const Eigen::VectorXd& y, double dt) -> Eigen::VectorXd { return y - dt * y; };
  auto rk4 = [](const Eigen::VectorXd& y, double dt) -> Eigen::VectorXd {
    const Eigen::VectorXd k1 = -y, k2 = -(y + 0.5 * dt * k1), k3 = -(y + 0.5 * dt * k2), k4 = -(y + dt * k3);
    return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  };
  CHECK(richardson_order(euler, y0, 1.0, {0.1, 0.05, 0.025, 0.0125}).order == doctest::Approx(1.0).epsilon(0.1));
  CHECK(richardson_order(rk4, y0, 1.0, {0.2, 0.1, 0.05, 0.025}).order == doctest::Approx(4.0).epsilon(0.025));
  CHECK_THROWS_AS(richardson_order(rk4, y0, 1.0, {1e-4, 5e-5, 2.5e-5}), Error);
  CHECK_THROWS_AS(richardson_order(rk4, y0, 1.0, {0.1, 0.05}), Error);
}

TEST_CASE("integrate_dp45 reproduces exponential growth") {
  auto f = [](double, const Eigen::VectorXd& y) -> Eigen::VectorXd { return 0.7 * y; };
  const Eigen::VectorXd y = integrate_dp45(f, Eigen::VectorXd::Ones(1), 0.0, 2.0, 1e-12, 1e-12);
  CHECK(y(0) == doctest::Approx(std::exp(1.4)).epsilon(1e-10));
  const Eigen::VectorXd back = integrate_dp45(f, y, 2.0, 0.0, 1e-12, 1e-12);
  CHECK(back(0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("characteristic_solution on closed-form fields") {
  auto BF = [](const Mat2& L) -> Eigen::MatrixXd {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 4);
    B.block(0, 0, 2, 2) = L;
    B.block(2, 2, 2, 2) = L;
    return B;
  };
  Mat2 L;
  L << 0.1, 0.4, -0.2, 0.05;
  OracleVelocity lin = [L](const Vec2& x) { return std::make_pair(Vec2(L * x), L); };
  auto I0 = [](const Vec2&) -> Eigen::VectorXd { return (Eigen::VectorXd(4) << 1, 0, 0, 1).finished(); };
  const Eigen::VectorXd F = characteristic_solution(BF, lin, I0, Vec2(0.3, 0.6), 1.0);
  const Mat2 E = ode_exponential(L, 1.0);
  CHECK((Eigen::Map<const Mat2>(F.data()) - E).norm() < 1e-10);

  // div-free rotation: density is carried unchanged
  OracleVelocity rot = [](const Vec2& x) {
    Mat2 W;
    W << 0.0, -1.0, 1.0, 0.0;
    return std::make_pair(Vec2(W * x), W);
  };
  auto Brho = [](const Mat2& G) -> Eigen::MatrixXd { return Eigen::MatrixXd::Constant(1, 1, -G.trace()); };
  auto rho0 = [](const Vec2& x) -> Eigen::VectorXd { return Eigen::VectorXd::Constant(1, 1.0 + x.x()); };
  const double t = 0.5;
  const Vec2 x(0.4, 0.2);
  const Vec2 foot = rotation2(-t) * x;
  CHECK(characteristic_solution(Brho, rot, rho0, x, t)(0) == doctest::Approx(1.0 + foot.x()).epsilon(1e-10));

  // v = c x: 1/det F decays like exp(-2ct)
  const double c = 0.3;
  OracleVelocity dil = [c](const Vec2& x) { return std::make_pair(Vec2(c * x), Mat2(c * Mat2::Identity())); };
  auto inv0 = [](const Vec2&) -> Eigen::VectorXd { return Eigen::VectorXd::Constant(1, 0.5); };
  CHECK(characteristic_solution(Brho, dil, inv0, x, 1.0)(0) == doctest::Approx(0.5 * std::exp(-2 * c)).epsilon(1e-10));
}

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {2, 3, 5, 8}) {
    const auto [x, w] = gauss_legendre(n);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK((x.array().pow(d) * w.array()).sum() == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  const double I = reference_integral([](const Vec2& p) { return p.x() * p.x() * p.y(); }, 2.0, 1.0, 2, 3);
  CHECK(I == doctest::Approx(8.0 / 3.0 * 0.5).epsilon(1e-14));
}

TEST_CASE("permutation_det on known matrices") {
  Eigen::MatrixXd A(3, 3);
  A << 2, 0, 1, 1, 3, 2, 1, 1, 2;
  CHECK(permutation_det(A) == doctest::Approx(6.0));
  CHECK(permutation_det(Eigen::MatrixXd::Identity(4, 4)) == 1.0);
}
