#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace ekv {

template <int Dim, class Scalar = double>
using Mat = Eigen::Matrix<Scalar, Dim, Dim>;

template <int Dim, class Scalar = double>
using Vec = Eigen::Matrix<Scalar, Dim, 1>;

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

// Third-order tensor stored as Dim slices: slice k holds A(i,j,k).
// Gradients of matrix fields use the last index for the derivative.
template <int Dim, class Scalar = double>
struct Ten3 {
  std::array<Mat<Dim, Scalar>, Dim> slice;

  static Ten3 Zero() {
    Ten3 t;
    for (auto& s : t.slice) s.setZero();
    return t;
  }
  Scalar operator()(int i, int j, int k) const { return slice[k](i, j); }
  Scalar& operator()(int i, int j, int k) { return slice[k](i, j); }

  Ten3& operator*=(Scalar a) {
    for (auto& s : slice) s *= a;
    return *this;
  }
  Ten3& operator+=(const Ten3& o) {
    for (int k = 0; k < Dim; ++k) slice[k] += o.slice[k];
    return *this;
  }
  friend Ten3 operator*(Scalar a, Ten3 t) { return t *= a; }
  friend Ten3 operator+(Ten3 a, const Ten3& b) { return a += b; }
};

template <int Dim, class Scalar>
Scalar det(const Mat<Dim, Scalar>& A) {
  if constexpr (Dim == 1) {
    return A(0, 0);
  } else if constexpr (Dim == 2) {
    return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  } else {
    static_assert(Dim == 3, "det: Dim must be 1, 2 or 3");
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
           A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
  }
}

// Cofactor matrix, Cof(A) = det(A) A^{-T} for invertible A.
template <int Dim, class Scalar>
Mat<Dim, Scalar> cof(const Mat<Dim, Scalar>& A) {
  Mat<Dim, Scalar> C;
  if constexpr (Dim == 1) {
    C(0, 0) = Scalar(1);
  } else if constexpr (Dim == 2) {
    C << A(1, 1), -A(1, 0), -A(0, 1), A(0, 0);
  } else {
    static_assert(Dim == 3, "cof: Dim must be 1, 2 or 3");
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        C(i, j) = A(i1, j1) * A(i2, j2) - A(i1, j2) * A(i2, j1);
      }
    }
  }
  return C;
}

template <int Dim, class Scalar>
Scalar frobenius(const Mat<Dim, Scalar>& A) {
  return A.norm();
}

template <int Dim, class Scalar>
Scalar frobenius(const Ten3<Dim, Scalar>& A) {
  Scalar s = 0;
  for (const auto& m : A.slice) s += m.squaredNorm();
  return std::sqrt(s);
}

template <int Dim, class Scalar>
Scalar contract(const Mat<Dim, Scalar>& A, const Mat<Dim, Scalar>& B) {
  return (A.array() * B.array()).sum();
}

// A ⋮ B
template <int Dim, class Scalar>
Scalar contract(const Ten3<Dim, Scalar>& A, const Ten3<Dim, Scalar>& B) {
  Scalar s = 0;
  for (int k = 0; k < Dim; ++k) s += contract<Dim, Scalar>(A.slice[k], B.slice[k]);
  return s;
}

template <int Dim, class Scalar>
Mat<Dim, Scalar> sym(const Mat<Dim, Scalar>& A) {
  return Scalar(0.5) * (A + A.transpose());
}

template <int Dim, class Scalar>
Mat<Dim, Scalar> skew(const Mat<Dim, Scalar>& A) {
  return Scalar(0.5) * (A - A.transpose());
}

// e(v) from the velocity gradient L = ∇v.
template <int Dim, class Scalar>
Mat<Dim, Scalar> sym_grad(const Mat<Dim, Scalar>& L) {
  return sym<Dim, Scalar>(L);
}

// ∇e(v) from the Hessian of v: H(i,j,k) = ∂_j ∂_k v_i.
template <int Dim, class Scalar>
Ten3<Dim, Scalar> sym_grad(const Ten3<Dim, Scalar>& H) {
  Ten3<Dim, Scalar> G;
  for (int k = 0; k < Dim; ++k)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j) G.slice[k](i, j) = Scalar(0.5) * (H(i, j, k) + H(j, i, k));
  return G;
}

// Matrix exponential by scaling and squaring with a diagonal [6/6] Padé approximant.
template <int Dim, class Scalar>
Mat<Dim, Scalar> expm(const Mat<Dim, Scalar>& A) {
  static constexpr double c[7] = {1.0,          0.5,           5.0 / 44.0,      1.0 / 66.0,
                                  1.0 / 792.0,  1.0 / 15840.0, 1.0 / 665280.0};
  using std::ceil;
  using std::log2;
  const Scalar norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > Scalar(0.5)) s = static_cast<int>(ceil(log2(norm1 / Scalar(0.5))));
  const Mat<Dim, Scalar> X = A / std::ldexp(Scalar(1), s);
  const Mat<Dim, Scalar> I = Mat<Dim, Scalar>::Identity();
  Mat<Dim, Scalar> P = I, N = I, D = I;
  for (int j = 1; j <= 6; ++j) {
    P = P * X;
    N += Scalar(c[j]) * P;
    D += Scalar((j % 2) ? -c[j] : c[j]) * P;
  }
  Mat<Dim, Scalar> E = D.partialPivLu().solve(N);
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

inline Mat2 rotation2(double angle) {
  Mat2 Q;
  Q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return Q;
}

template <int Dim>
Mat<Dim> random_rotation(std::mt19937_64& rng) {
  if constexpr (Dim == 2) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    return rotation2(u(rng));
  } else {
    static_assert(Dim == 3, "random_rotation: Dim must be 2 or 3");
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    return q.toRotationMatrix();
  }
}

template <int Dim>
Mat<Dim> random_rotation(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_rotation<Dim>(rng);
}

// C^1 step 3x^2 - 2x^3 clamped to [0,1], with its derivative.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

inline double smoothstep_d(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

}  // namespace ekv
