#pragma once

#include "ekv/tensors.hpp"

#include <Eigen/Dense>

namespace ekv {

// Uniform cell-centred grid on [x0, x0+Lx] × [y0, y0+Ly].  Nodal fields are
// flat vectors indexed n = i + nx*j, i.e. column-major nx × ny arrays.
struct Grid2D {
  int nx = 64, ny = 64;
  double Lx = 1.0, Ly = 1.0;
  double x0 = 0.0, y0 = 0.0;
  bool periodic = true;

  Grid2D() = default;
  Grid2D(int nx, int ny, double Lx, double Ly, bool periodic, double x0 = 0.0, double y0 = 0.0)
      : nx(nx), ny(ny), Lx(Lx), Ly(Ly), x0(x0), y0(y0), periodic(periodic) {}

  int size() const { return nx * ny; }
  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }
  double x(int i) const { return x0 + (i + 0.5) * hx(); }
  double y(int j) const { return y0 + (j + 0.5) * hy(); }
  Vec2 node(int n) const { return Vec2(x(n % nx), y(n / nx)); }
  double cell_area() const { return hx() * hy(); }
};

// First-derivative matrix on n cell-centred points of a segment of length L:
// Fourier collocation when periodic, fourth-order finite differences with
// one-sided closures otherwise.
Eigen::MatrixXd derivative_matrix(int n, double L, bool periodic);

// ∂/∂x and ∂/∂y of nodal fields.
class GridDerivative {
 public:
  explicit GridDerivative(const Grid2D& g);
  Eigen::VectorXd dx(const Eigen::VectorXd& f) const;
  Eigen::VectorXd dy(const Eigen::VectorXd& f) const;
  const Grid2D& grid() const { return g_; }

 private:
  Grid2D g_;
  Eigen::MatrixXd Dx_, DyT_;
};

// Bicubic Lagrange interpolation of a nodal field at an arbitrary point.
// Periodic grids wrap; otherwise the point is clamped to the domain and the
// stencil is shifted inward.
double interpolate_cubic(const Grid2D& g, const Eigen::Ref<const Eigen::VectorXd>& f, const Vec2& p);

}  // namespace ekv
