#include "ekv/grid.hpp"

#include <cmath>

namespace ekv {

Eigen::MatrixXd derivative_matrix(int n, double L, bool periodic) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  const double h = L / n;
  if (periodic) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int k = i - j;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        if (n % 2 == 0)
          D(i, j) = (M_PI / L) * sgn / std::tan(M_PI * k / n);
        else
          D(i, j) = (M_PI / L) * sgn / std::sin(M_PI * k / n);
      }
    }
    return D;
  }
  if (n < 5) {
    for (int i = 0; i < n; ++i) {
      const int a = std::max(0, i - 1), b = std::min(n - 1, i + 1);
      D(i, a) -= 1.0 / ((b - a) * h);
      D(i, b) += 1.0 / ((b - a) * h);
    }
    return D;
  }
  static const double c[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  static const double l0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
  static const double l1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12};
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i <= n - 3) {
      for (int s = 0; s < 5; ++s) D(i, i - 2 + s) = c[s] / h;
    } else if (i == 0) {
      for (int s = 0; s < 5; ++s) D(i, s) = l0[s] / h;
    } else if (i == 1) {
      for (int s = 0; s < 5; ++s) D(i, s) = l1[s] / h;
    } else if (i == n - 1) {
      for (int s = 0; s < 5; ++s) D(i, n - 1 - s) = -l0[s] / h;
    } else {
      for (int s = 0; s < 5; ++s) D(i, n - 1 - s) = -l1[s] / h;
    }
  }
  return D;
}

GridDerivative::GridDerivative(const Grid2D& g)
    : g_(g),
      Dx_(derivative_matrix(g.nx, g.Lx, g.periodic)),
      DyT_(derivative_matrix(g.ny, g.Ly, g.periodic).transpose()) {}

Eigen::VectorXd GridDerivative::dx(const Eigen::VectorXd& f) const {
  Eigen::VectorXd out(f.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), g_.nx, g_.ny).noalias() =
      Dx_ * Eigen::Map<const Eigen::MatrixXd>(f.data(), g_.nx, g_.ny);
  return out;
}

Eigen::VectorXd GridDerivative::dy(const Eigen::VectorXd& f) const {
  Eigen::VectorXd out(f.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), g_.nx, g_.ny).noalias() =
      Eigen::Map<const Eigen::MatrixXd>(f.data(), g_.nx, g_.ny) * DyT_;
  return out;
}

namespace {

// Stencil start and Lagrange weights along one axis.
void cubic_weights(double s, int n, bool periodic, int& start, double w[4]) {
  // s is the position in index units (node i sits at s = i)
  int base = static_cast<int>(std::floor(s)) - 1;
  if (!periodic) {
    if (n < 4) {
      base = 0;
    } else {
      base = std::clamp(base, 0, n - 4);
    }
  }
  start = base;
  for (int a = 0; a < 4; ++a) {
    double p = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) p *= (s - (base + b)) / double(a - b);
    w[a] = p;
  }
}

}  // namespace

double interpolate_cubic(const Grid2D& g, const Eigen::Ref<const Eigen::VectorXd>& f, const Vec2& p) {
  double sx = (p.x() - g.x0) / g.hx() - 0.5;
  double sy = (p.y() - g.y0) / g.hy() - 0.5;
  if (!g.periodic) {
    sx = std::clamp(sx, -0.5, g.nx - 0.5);
    sy = std::clamp(sy, -0.5, g.ny - 0.5);
  }
  int ix, iy;
  double wx[4], wy[4];
  cubic_weights(sx, g.nx, g.periodic, ix, wx);
  cubic_weights(sy, g.ny, g.periodic, iy, wy);
  const int mx = std::min(4, g.nx), my = std::min(4, g.ny);
  double v = 0.0;
  for (int b = 0; b < my; ++b) {
    int j = iy + b;
    if (g.periodic) j = ((j % g.ny) + g.ny) % g.ny;
    double row = 0.0;
    for (int a = 0; a < mx; ++a) {
      int i = ix + a;
      if (g.periodic) i = ((i % g.nx) + g.nx) % g.nx;
      row += wx[a] * f[i + g.nx * j];
    }
    v += wy[b] * row;
  }
  return v;
}

}  // namespace ekv
