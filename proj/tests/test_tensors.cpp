#include "ekv/oracles.hpp"
#include "ekv/tensors.hpp"

#include <doctest.h>

#include <random>

using namespace ekv;

namespace {

template <int Dim>
Mat<Dim> random_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat<Dim> A;
  for (int i = 0; i < Dim; ++i)
    for (int j = 0; j < Dim; ++j) A(i, j) = u(rng);
  return A;
}

}  // namespace

TEST_CASE("det matches the permutation expansion") {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 50; ++s) {
    const Mat2 A = random_matrix<2>(rng);
    const Mat3 B = random_matrix<3>(rng);
    CHECK(det<2, double>(A) == doctest::Approx(oracles::permutation_det(A)).epsilon(1e-14));
    CHECK(det<3, double>(B) == doctest::Approx(oracles::permutation_det(B)).epsilon(1e-13));
  }
}

TEST_CASE("cofactor is the derivative of det and satisfies cof(A)^T A = det(A) I") {
  std::mt19937_64 rng(4);
  for (int s = 0; s < 20; ++s) {
    const Mat3 A = random_matrix<3>(rng);
    const Mat3 C = cof<3, double>(A);
    CHECK((C.transpose() * A - det<3, double>(A) * Mat3::Identity()).norm() < 1e-13);
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(A.data(), 9);
    auto f = [](const Eigen::VectorXd& y) { return det<3, double>(Eigen::Map<const Mat3>(y.data())); };
    const auto rep = oracles::fd_gradient_check(f, Eigen::Map<const Eigen::VectorXd>(C.data(), 9), x);
    CHECK(rep.passed);
  }
}

TEST_CASE("expm agrees with the ODE oracle and maps skew matrices to rotations") {
  std::mt19937_64 rng(5);
  for (int s = 0; s < 10; ++s) {
    const Mat2 L = 2.0 * random_matrix<2>(rng);
    const Mat2 E = expm<2, double>(L);
    CHECK((E - oracles::ode_exponential(L, 1.0)).norm() < 1e-10 * E.norm());
    CHECK(det<2, double>(E) == doctest::Approx(std::exp(L.trace())).epsilon(1e-12));
  }
  Mat2 W;
  W << 0.0, -0.7, 0.7, 0.0;
  CHECK((expm<2, double>(W) - rotation2(0.7)).norm() < 1e-14);
  CHECK((expm<2, double>(Mat2::Zero()) - Mat2::Identity()).norm() == 0.0);
}

TEST_CASE("sym, skew and the contraction") {
  std::mt19937_64 rng(6);
  const Mat3 A = random_matrix<3>(rng), B = random_matrix<3>(rng);
  CHECK((sym<3, double>(A) + skew<3, double>(A) - A).norm() < 1e-15);
  CHECK(contract<3, double>(sym<3, double>(A), skew<3, double>(B)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(contract<3, double>(A, A) == doctest::Approx(frobenius<3, double>(A) * frobenius<3, double>(A)));
  CHECK((sym_grad<3, double>(A) - 0.5 * (A + A.transpose())).norm() < 1e-15);
}

TEST_CASE("sym_grad of a third-order tensor symmetrises the first two slots") {
  std::mt19937_64 rng(7);
  Ten3<2> H;
  for (int k = 0; k < 2; ++k) H.slice[k] = random_matrix<2>(rng);
  const Ten3<2> G = sym_grad<2, double>(H);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        CHECK(G(i, j, k) == doctest::Approx(0.5 * (H(i, j, k) + H(j, i, k))));
        CHECK(G(i, j, k) == G(j, i, k));
      }
  CHECK(contract<2, double>(G, G) == doctest::Approx(frobenius<2, double>(G) * frobenius<2, double>(G)));
}

TEST_CASE("random rotations are proper orthogonal") {
  std::mt19937_64 rng(8);
  for (int s = 0; s < 20; ++s) {
    const Mat2 R2 = random_rotation<2>(rng);
    const Mat3 R3 = random_rotation<3>(rng);
    CHECK((R2.transpose() * R2 - Mat2::Identity()).norm() < 1e-14);
    CHECK((R3.transpose() * R3 - Mat3::Identity()).norm() < 1e-14);
    CHECK(det<2, double>(R2) == doctest::Approx(1.0));
    CHECK(det<3, double>(R3) == doctest::Approx(1.0));
  }
  CHECK((random_rotation<3>(std::uint64_t{11}) - random_rotation<3>(std::uint64_t{11})).norm() == 0.0);
}

TEST_CASE("smoothstep is clamped and C1") {
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(0.5) == 0.5);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(2.0) == 1.0);
  CHECK(smoothstep_d(0.0) == 0.0);
  CHECK(smoothstep_d(1.0) == 0.0);
  for (double x : {0.1, 0.3, 0.77}) {
    const double h = 1e-6;
    CHECK(smoothstep_d(x) == doctest::Approx((smoothstep(x + h) - smoothstep(x - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("tensor helpers accept other scalar types") {
  Eigen::Matrix2f A;
  A << 1.f, 2.f, 3.f, 4.f;
  CHECK(det<2, float>(A) == doctest::Approx(-2.0));
  Eigen::Matrix<long double, 2, 2> B;
  B << 2, 0, 0, 3;
  CHECK(static_cast<double>(det<2, long double>(B)) == 6.0);
}
