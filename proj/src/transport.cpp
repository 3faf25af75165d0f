#include "ekv/transport.hpp"

#include "ekv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ekv {

int component_count(FieldKind kind) {
  switch (kind) {
    case FieldKind::DeformationGradient:
    case FieldKind::InverseDeformation:
      return 4;
    case FieldKind::ReturnMap:
      return 2;
    default:
      return 1;
  }
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::DeformationGradient: return "deformation_gradient";
    case FieldKind::Density: return "density";
    case FieldKind::InverseDensity: return "inverse_density";
    case FieldKind::InverseDet: return "inverse_det";
    case FieldKind::ReturnMap: return "return_map";
    case FieldKind::InverseDeformation: return "inverse_deformation";
  }
  return "unknown";
}

SmallMat BilinearRHS::matrix(const Mat2& L) const {
  SmallMat B = SmallMat::Zero(ncomp, ncomp);
  switch (kind) {
    case FieldKind::DeformationGradient:
      // vec(LF) = (I ⊗ L) vec F
      B.block<2, 2>(0, 0) = L;
      B.block<2, 2>(2, 2) = L;
      break;
    case FieldKind::InverseDeformation:
      // vec(-GL) = -(Lᵀ ⊗ I) vec G
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) B.block<2, 2>(2 * a, 2 * b) = -L(b, a) * Mat2::Identity();
      break;
    case FieldKind::Density:
    case FieldKind::InverseDet:
      B(0, 0) = -L.trace();
      break;
    case FieldKind::InverseDensity:
      B(0, 0) = L.trace();
      break;
    case FieldKind::ReturnMap:
      break;
  }
  return B;
}

BilinearRHS rhs_catalog(FieldKind kind) { return BilinearRHS{kind, component_count(kind)}; }

TransportField::TransportField(FieldKind k, const Grid2D& g)
    : kind(k), grid(g), values(Eigen::MatrixXd::Zero(g.size(), component_count(k))) {}

Mat2 TransportField::matrix_at(int n) const {
  Mat2 M;
  M << values(n, 0), values(n, 2), values(n, 1), values(n, 3);
  return M;
}

namespace {

TransportField advect_semi_lagrangian(const TransportField& f, const VelocityField& vel, double dt) {
  const BilinearRHS b = rhs_catalog(f.kind);
  const Grid2D& g = f.grid;
  const int nc = f.ncomp();
  TransportField out = f;
#pragma omp parallel for schedule(static)
  for (int n = 0; n < g.size(); ++n) {
    const Vec2 x = g.node(n);
    // departure point by a backward RK4 trace
    const Vec2 k1 = vel(x).v;
    const Vec2 k2 = vel(x - 0.5 * dt * k1).v;
    const Vec2 k3 = vel(x - 0.5 * dt * k2).v;
    const Vec2 k4 = vel(x - dt * k3).v;
    const Vec2 X = x - dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    SmallVec z(nc);
    for (int c = 0; c < nc; ++c) z(c) = interpolate_cubic(g, f.values.col(c), X);
    // carry z forward along the characteristic
    auto rate = [&](const Vec2& p, const SmallVec& zz, Vec2& dp) {
      const VelocitySample s = vel(p);
      dp = s.v;
      return SmallVec(b(s.grad, zz));
    };
    Vec2 p1, p2, p3, p4;
    const SmallVec r1 = rate(X, z, p1);
    const SmallVec r2 = rate(X + 0.5 * dt * p1, z + 0.5 * dt * r1, p2);
    const SmallVec r3 = rate(X + 0.5 * dt * p2, z + 0.5 * dt * r2, p3);
    const SmallVec r4 = rate(X + dt * p3, z + dt * r3, p4);
    const SmallVec zn = z + dt / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
    for (int c = 0; c < nc; ++c) out.values(n, c) = zn(c);
  }
  return out;
}

// Finite-volume form ∂t z + div(z v) = b(∇v,z) + z div v, first-order upwind
// fluxes, forward Euler.  Density has zero source so mass is conserved to
// round-off on periodic grids.
TransportField advect_upwind(const TransportField& f, const VelocityField& vel, double dt, double cfl_limit) {
  const BilinearRHS b = rhs_catalog(f.kind);
  const Grid2D& g = f.grid;
  const int nx = g.nx, ny = g.ny, nc = f.ncomp();
  const double hx = g.hx(), hy = g.hy();
  // face velocities
  Eigen::MatrixXd ux(nx + 1, ny), uy(nx, ny + 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) ux(i, j) = vel(Vec2(g.x0 + i * hx, g.y(j))).v.x();
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) uy(i, j) = vel(Vec2(g.x(i), g.y0 + j * hy)).v.y();
  double cfl = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = dt * (std::max(std::abs(ux(i, j)), std::abs(ux(i + 1, j))) / hx +
                             std::max(std::abs(uy(i, j)), std::abs(uy(i, j + 1))) / hy);
      cfl = std::max(cfl, c);
    }
  if (cfl > cfl_limit)
    throw Error(ErrorKind::CFLViolation, "upwind advect: CFL number " + std::to_string(cfl) +
                                             " exceeds " + std::to_string(cfl_limit));
  auto idx = [&](int i, int j) {
    if (g.periodic) {
      i = (i + nx) % nx;
      j = (j + ny) % ny;
    } else {
      i = std::clamp(i, 0, nx - 1);
      j = std::clamp(j, 0, ny - 1);
    }
    return i + nx * j;
  };
  TransportField out = f;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int n = i + nx * j;
      const VelocitySample s = vel(g.node(n));
      SmallVec z(nc);
      for (int c = 0; c < nc; ++c) z(c) = f.values(n, c);
      SmallVec src = b(s.grad, z) + s.grad.trace() * z;
      for (int c = 0; c < nc; ++c) {
        auto flux = [&](double u, int lo, int hi) {
          return u >= 0.0 ? u * f.values(lo, c) : u * f.values(hi, c);
        };
        const double fe = flux(ux(i + 1, j), n, idx(i + 1, j));
        const double fw = flux(ux(i, j), idx(i - 1, j), n);
        const double fn = flux(uy(i, j + 1), n, idx(i, j + 1));
        const double fs = flux(uy(i, j), idx(i, j - 1), n);
        out.values(n, c) = z(c) + dt * (src(c) - (fe - fw) / hx - (fn - fs) / hy);
      }
    }
  }
  return out;
}

TransportField advect_mol(const TransportField& f, const VelocityField& vel, double dt) {
  const BilinearRHS b = rhs_catalog(f.kind);
  const Grid2D& g = f.grid;
  GridDerivative D(g);
  Eigen::MatrixXd v(g.size(), 2), L(g.size(), 4);
  for (int n = 0; n < g.size(); ++n) {
    const VelocitySample s = vel(g.node(n));
    v.row(n) = s.v.transpose();
    L.row(n) << s.grad(0, 0), s.grad(1, 0), s.grad(0, 1), s.grad(1, 1);
  }
  const Eigen::MatrixXd& z = f.values;
  const Eigen::MatrixXd k1 = transport_rate(b, D, z, v, L);
  const Eigen::MatrixXd k2 = transport_rate(b, D, z + 0.5 * dt * k1, v, L);
  const Eigen::MatrixXd k3 = transport_rate(b, D, z + 0.5 * dt * k2, v, L);
  const Eigen::MatrixXd k4 = transport_rate(b, D, z + dt * k3, v, L);
  TransportField out = f;
  out.values = z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return out;
}

}  // namespace

Eigen::MatrixXd transport_rate(const BilinearRHS& b, const GridDerivative& D, const Eigen::MatrixXd& z,
                               const Eigen::MatrixXd& v, const Eigen::MatrixXd& L) {
  const int N = static_cast<int>(z.rows()), nc = static_cast<int>(z.cols());
  Eigen::MatrixXd out(N, nc);
  for (int c = 0; c < nc; ++c) {
    const Eigen::VectorXd zc = z.col(c);
    out.col(c) = -(v.col(0).array() * D.dx(zc).array() + v.col(1).array() * D.dy(zc).array()).matrix();
  }
  if (b.kind == FieldKind::ReturnMap) return out;
  for (int n = 0; n < N; ++n) {
    Mat2 Ln;
    Ln << L(n, 0), L(n, 2), L(n, 1), L(n, 3);
    const SmallVec zn = z.row(n).transpose();
    out.row(n) += b(Ln, zn).transpose();
  }
  return out;
}

TransportField advect(const TransportField& field, const VelocityField& velocity, double dt,
                      const AdvectOptions& opt) {
  switch (opt.scheme) {
    case AdvectScheme::SemiLagrangian: return advect_semi_lagrangian(field, velocity, dt);
    case AdvectScheme::Upwind: return advect_upwind(field, velocity, dt, opt.cfl_limit);
    case AdvectScheme::MethodOfLines: return advect_mol(field, velocity, dt);
  }
  return field;
}

TransportField r_laplacian_smooth(const TransportField& field, double tau, double r) {
  TransportField out = field;
  if (tau <= 0.0) return out;
  const Grid2D& g = field.grid;
  const int nx = g.nx, ny = g.ny, nc = field.ncomp();
  const double hx = g.hx(), hy = g.hy();
  Eigen::MatrixXd& z = out.values;
  auto wrap = [&](int i, int n) { return g.periodic ? (i + n) % n : std::clamp(i, 0, n - 1); };
  // centred derivatives at cells, used for the transverse part of face gradients
  auto cell_dx = [&](int i, int j, int c) {
    return (z(wrap(i + 1, nx) + nx * j, c) - z(wrap(i - 1, nx) + nx * j, c)) / (2.0 * hx);
  };
  auto cell_dy = [&](int i, int j, int c) {
    return (z(i + nx * wrap(j + 1, ny), c) - z(i + nx * wrap(j - 1, ny), c)) / (2.0 * hy);
  };
  const int nfx = g.periodic ? nx : nx - 1, nfy = g.periodic ? ny : ny - 1;
  Eigen::MatrixXd ax(nx, ny), ay(nx, ny);  // face coefficients, face (i+½, j) and (i, j+½)
  double remaining = tau;
  for (int sub = 0; remaining > 0.0 && sub < 1000000; ++sub) {
    ax.setZero();
    ay.setZero();
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nfx; ++i) {
        const int ip = wrap(i + 1, nx);
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
          const double gx = (z(ip + nx * j, c) - z(i + nx * j, c)) / hx;
          const double gy = 0.5 * (cell_dy(i, j, c) + cell_dy(ip, j, c));
          s += gx * gx + gy * gy;
        }
        ax(i, j) = s > 0.0 ? std::pow(s, 0.5 * (r - 2.0)) : 0.0;
      }
    for (int j = 0; j < nfy; ++j)
      for (int i = 0; i < nx; ++i) {
        const int jp = wrap(j + 1, ny);
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
          const double gy = (z(i + nx * jp, c) - z(i + nx * j, c)) / hy;
          const double gx = 0.5 * (cell_dx(i, j, c) + cell_dx(i, jp, c));
          s += gx * gx + gy * gy;
        }
        ay(i, j) = s > 0.0 ? std::pow(s, 0.5 * (r - 2.0)) : 0.0;
      }
    double rate = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double w = (ax(i, j) + ax(wrap(i - 1, nx), j) * (g.periodic || i > 0)) / (hx * hx) +
                         (ay(i, j) + ay(i, wrap(j - 1, ny)) * (g.periodic || j > 0)) / (hy * hy);
        rate = std::max(rate, w);
      }
    if (rate == 0.0) break;
    const double step = std::min(remaining, 0.9 / rate);
    Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(z.rows(), nc);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nfx; ++i) {
        const int a = i + nx * j, b = wrap(i + 1, nx) + nx * j;
        const double w = ax(i, j) / (hx * hx);
        dz.row(a) += w * (z.row(b) - z.row(a));
        dz.row(b) -= w * (z.row(b) - z.row(a));
      }
    for (int j = 0; j < nfy; ++j)
      for (int i = 0; i < nx; ++i) {
        const int a = i + nx * j, b = i + nx * wrap(j + 1, ny);
        const double w = ay(i, j) / (hy * hy);
        dz.row(a) += w * (z.row(b) - z.row(a));
        dz.row(b) -= w * (z.row(b) - z.row(a));
      }
    z += step * dz;
    remaining -= step;
  }
  return out;
}

TransportField parabolic_regularized_advect(const TransportField& field, const VelocityField& velocity,
                                            double dt, double eps, double r, const AdvectOptions& opt) {
  if (!(r > 2.0)) throw Error(ErrorKind::UsageError, "parabolic regularization needs r > 2");
  return r_laplacian_smooth(advect(field, velocity, dt, opt), eps * dt, r);
}

ConsistencyReport consistency_monitors(const Eigen::VectorXd& rho, const Eigen::MatrixXd& F,
                                       const Eigen::VectorXd& rho_R, const Eigen::VectorXd* inverse_det) {
  ConsistencyReport rep;
  for (int n = 0; n < rho.size(); ++n) {
    const double J = F(n, 0) * F(n, 3) - F(n, 2) * F(n, 1);
    rep.rho_det_drift = std::max(rep.rho_det_drift, std::abs(rho(n) * J - rho_R(n)) / std::abs(rho_R(n)));
    if (inverse_det) rep.inverse_det_drift = std::max(rep.inverse_det_drift, std::abs((*inverse_det)(n) * J - 1.0));
  }
  return rep;
}

}  // namespace ekv
