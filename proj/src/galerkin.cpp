#include "ekv/galerkin.hpp"

#include "ekv/errors.hpp"

#include <cmath>

namespace ekv {

int Basis1D::size() const {
  switch (family) {
    case Family::Trig: return 2 * k + 1;
    case Family::Sine: return k;
    case Family::Cosine: return k + 1;
  }
  return 0;
}

double Basis1D::eval(int a, double x, int d) const {
  auto cosd = [&](double w) {
    switch (d) {
      case 0: return std::cos(w * x);
      case 1: return -w * std::sin(w * x);
      default: return -w * w * std::cos(w * x);
    }
  };
  auto sind = [&](double w) {
    switch (d) {
      case 0: return std::sin(w * x);
      case 1: return w * std::cos(w * x);
      default: return -w * w * std::sin(w * x);
    }
  };
  switch (family) {
    case Family::Trig: {
      if (a == 0) return d == 0 ? 1.0 : 0.0;
      const int m = (a + 1) / 2;
      const double w = 2.0 * M_PI * m / L;
      return (a % 2) ? cosd(w) : sind(w);
    }
    case Family::Sine: return sind((a + 1) * M_PI / L);
    case Family::Cosine: return cosd(a * M_PI / L);
  }
  return 0.0;
}

namespace {

Tables1D make_tables(const Basis1D& b, int n, double h) {
  Tables1D t;
  const int s = b.size();
  for (int d = 0; d < 3; ++d) {
    t.B[d].resize(n, s);
    t.lo[d].resize(s);
    t.hi[d].resize(s);
    for (int a = 0; a < s; ++a) {
      for (int i = 0; i < n; ++i) t.B[d](i, a) = b.eval(a, (i + 0.5) * h, d);
      t.lo[d](a) = b.eval(a, 0.0, d);
      t.hi[d](a) = b.eval(a, b.L, d);
    }
  }
  return t;
}

}  // namespace

Vec2 edge_normal(int edge) {
  switch (edge) {
    case Left: return Vec2(-1, 0);
    case Right: return Vec2(1, 0);
    case Bottom: return Vec2(0, -1);
    default: return Vec2(0, 1);
  }
}

Vec2 Quadrature::edge_node(int edge, int m) const {
  switch (edge) {
    case Left: return Vec2(grid.x0, grid.y(m));
    case Right: return Vec2(grid.x0 + grid.Lx, grid.y(m));
    case Bottom: return Vec2(grid.x(m), grid.y0);
    default: return Vec2(grid.x(m), grid.y0 + grid.Ly);
  }
}

Quadrature make_quadrature(const Domain& dom, int n) {
  Quadrature q;
  q.grid = Grid2D(n, n, dom.Lx, dom.Ly, dom.bc == BcMode::Periodic);
  q.has_boundary = dom.bc == BcMode::SlipRectangle;
  return q;
}

GalerkinSpace::GalerkinSpace(std::vector<std::pair<Basis1D, Basis1D>> families, const Quadrature& q,
                             BcMode bc, int k)
    : q_(q), bc_(bc), k_(k) {
  for (auto& [fx, fy] : families) {
    Component c{fx, fy, make_tables(fx, q.grid.nx, q.grid.hx()), make_tables(fy, q.grid.ny, q.grid.hy()),
                dim_};
    dim_ += c.size();
    comps_.push_back(std::move(c));
  }
}

Eigen::VectorXd GalerkinSpace::eval(const Eigen::VectorXd& coeffs, int c, int ox, int oy) const {
  const Component& C = comps_[c];
  Eigen::Map<const Eigen::MatrixXd> A(coeffs.data() + C.offset, C.na(), C.nb());
  Eigen::VectorXd out(q_.grid.size());
  Eigen::Map<Eigen::MatrixXd>(out.data(), q_.grid.nx, q_.grid.ny).noalias() =
      (C.tx.B[ox] * A) * C.ty.B[oy].transpose();
  return out;
}

Eigen::VectorXd GalerkinSpace::eval_edge(const Eigen::VectorXd& coeffs, int c, int edge) const {
  const Component& C = comps_[c];
  Eigen::Map<const Eigen::MatrixXd> A(coeffs.data() + C.offset, C.na(), C.nb());
  switch (edge) {
    case Left: return (C.tx.lo[0] * A * C.ty.B[0].transpose()).transpose();
    case Right: return (C.tx.hi[0] * A * C.ty.B[0].transpose()).transpose();
    case Bottom: return C.tx.B[0] * A * C.ty.lo[0].transpose();
    default: return C.tx.B[0] * A * C.ty.hi[0].transpose();
  }
}

void GalerkinSpace::add_weak(const Eigen::VectorXd& W, int c, int ox, int oy, Eigen::VectorXd& out) const {
  const Component& C = comps_[c];
  Eigen::Map<const Eigen::MatrixXd> Wm(W.data(), q_.grid.nx, q_.grid.ny);
  Eigen::Map<Eigen::MatrixXd> A(out.data() + C.offset, C.na(), C.nb());
  A.noalias() += C.tx.B[ox].transpose() * (Wm * C.ty.B[oy]);
}

void GalerkinSpace::add_weak_edge(const Eigen::VectorXd& W, int c, int edge, Eigen::VectorXd& out) const {
  const Component& C = comps_[c];
  Eigen::Map<Eigen::MatrixXd> A(out.data() + C.offset, C.na(), C.nb());
  switch (edge) {
    case Left: A.noalias() += C.tx.lo[0].transpose() * (W.transpose() * C.ty.B[0]); break;
    case Right: A.noalias() += C.tx.hi[0].transpose() * (W.transpose() * C.ty.B[0]); break;
    case Bottom: A.noalias() += (C.tx.B[0].transpose() * W) * C.ty.lo[0]; break;
    default: A.noalias() += (C.tx.B[0].transpose() * W) * C.ty.hi[0]; break;
  }
}

Eigen::MatrixXd GalerkinSpace::weighted_gram(const Eigen::VectorXd& w, int c) const {
  const Component& C = comps_[c];
  const int na = C.na(), nb = C.nb(), nx = q_.grid.nx, ny = q_.grid.ny;
  Eigen::MatrixXd P(nx, na * na), Q(ny, nb * nb);
  for (int a = 0; a < na; ++a)
    for (int a2 = 0; a2 < na; ++a2) P.col(a + na * a2) = C.tx.B[0].col(a).cwiseProduct(C.tx.B[0].col(a2));
  for (int b = 0; b < nb; ++b)
    for (int b2 = 0; b2 < nb; ++b2) Q.col(b + nb * b2) = C.ty.B[0].col(b).cwiseProduct(C.ty.B[0].col(b2));
  Eigen::Map<const Eigen::MatrixXd> Wm(w.data(), nx, ny);
  const Eigen::MatrixXd T = P.transpose() * (Wm * Q);
  Eigen::MatrixXd M(na * nb, na * nb);
  for (int b = 0; b < nb; ++b)
    for (int b2 = 0; b2 < nb; ++b2)
      for (int a = 0; a < na; ++a)
        for (int a2 = 0; a2 < na; ++a2) M(a + na * b, a2 + na * b2) = T(a + na * a2, b + nb * b2);
  return M;
}

Eigen::MatrixXd GalerkinSpace::derivative_gram(int c1, int ox1, int oy1, int c2, int ox2, int oy2) const {
  const Component& A = comps_[c1];
  const Component& B = comps_[c2];
  const Eigen::MatrixXd Gx = A.tx.B[ox1].transpose() * B.tx.B[ox2] * q_.grid.hx();
  const Eigen::MatrixXd Gy = A.ty.B[oy1].transpose() * B.ty.B[oy2] * q_.grid.hy();
  Eigen::MatrixXd M(A.size(), B.size());
  for (int b = 0; b < A.nb(); ++b)
    for (int b2 = 0; b2 < B.nb(); ++b2)
      for (int a = 0; a < A.na(); ++a)
        for (int a2 = 0; a2 < B.na(); ++a2) M(a + A.na() * b, a2 + B.na() * b2) = Gx(a, a2) * Gy(b, b2);
  return M;
}

Eigen::MatrixXd GalerkinSpace::mass(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int c = 0; c < ncomp(); ++c)
    M.block(comps_[c].offset, comps_[c].offset, comps_[c].size(), comps_[c].size()) = weighted_gram(w, c);
  return M;
}

Eigen::MatrixXd GalerkinSpace::stiffness() const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dim_, dim_);
  auto block = [&](int c1, int c2) {
    return K.block(comps_[c1].offset, comps_[c2].offset, comps_[c1].size(), comps_[c2].size());
  };
  if (ncomp() == 1) {
    block(0, 0) += derivative_gram(0, 1, 0, 0, 1, 0) + derivative_gram(0, 0, 1, 0, 0, 1);
    return K;
  }
  // ∇e(u)⋮∇e(u') = ½ Σ u_i,jk u'_i,jk + ½ Σ u_i,jk u'_j,ik
  auto ord = [](int j, int k, int& ox, int& oy) {
    ox = (j == 0) + (k == 0);
    oy = (j == 1) + (k == 1);
  };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        int ox, oy, px, py;
        ord(j, k, ox, oy);
        block(i, i) += 0.5 * derivative_gram(i, ox, oy, i, ox, oy);
        ord(i, k, px, py);
        block(i, j) += 0.5 * derivative_gram(i, ox, oy, j, px, py);
      }
  return K;
}

namespace {

void check_domain(const Domain& dom, int k, const Quadrature& q) {
  if (dom.shape != DomainShape::Rectangle)
    throw Error(ErrorKind::UnsupportedDomain, "Galerkin spaces are built on rectangles only");
  if (k < 1) throw Error(ErrorKind::UsageError, "Galerkin order k must be >= 1");
  const int need = dom.bc == BcMode::Periodic ? 2 * k + 1 : k + 1;
  if (q.grid.nx < need || q.grid.ny < need)
    throw Error(ErrorKind::QuadratureUnderResolved,
                "quadrature grid " + std::to_string(q.grid.nx) + " cannot integrate basis products at k=" +
                    std::to_string(k) + " (needs " + std::to_string(need) + " nodes)");
}

}  // namespace

GalerkinSpace build_velocity_space(const Domain& dom, int k, const Quadrature& q) {
  check_domain(dom, k, q);
  if (dom.bc == BcMode::Periodic) {
    const Basis1D bx{Family::Trig, k, dom.Lx}, by{Family::Trig, k, dom.Ly};
    return GalerkinSpace({{bx, by}, {bx, by}}, q, dom.bc, k);
  }
  return GalerkinSpace({{Basis1D{Family::Sine, k, dom.Lx}, Basis1D{Family::Cosine, k, dom.Ly}},
                        {Basis1D{Family::Cosine, k, dom.Lx}, Basis1D{Family::Sine, k, dom.Ly}}},
                       q, dom.bc, k);
}

GalerkinSpace build_temperature_space(const Domain& dom, int k, const Quadrature& q) {
  check_domain(dom, k, q);
  const Family f = dom.bc == BcMode::Periodic ? Family::Trig : Family::Cosine;
  return GalerkinSpace({{Basis1D{f, k, dom.Lx}, Basis1D{f, k, dom.Ly}}}, q, dom.bc, k);
}

Eigen::VectorXd project(const GalerkinSpace& space, const Eigen::MatrixXd& values, const Eigen::VectorXd* weights) {
  const Quadrature& q = space.quadrature();
  const Eigen::VectorXd w =
      weights ? Eigen::VectorXd(*weights) : Eigen::VectorXd::Constant(q.grid.size(), q.weight());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.dim());
  for (int c = 0; c < space.ncomp(); ++c) space.add_weak(values.col(c).cwiseProduct(w), c, 0, 0, rhs);
  const Eigen::MatrixXd M = space.mass(w);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  const double scale = M.diagonal().cwiseAbs().maxCoeff();
  if (llt.info() != Eigen::Success || !(scale > 0.0) || llt.rcond() < 1e-13)
    throw Error(ErrorKind::SingularGram, "project: Gram matrix is singular");
  return llt.solve(rhs);
}

Kinematics kinematics_from_coeffs(const GalerkinSpace& V, const Eigen::VectorXd& a) {
  const int N = V.quadrature().grid.size();
  Kinematics k;
  k.v.resize(N, 2);
  k.L.resize(N, 4);
  k.H.resize(N, 6);
  for (int c = 0; c < 2; ++c) {
    k.v.col(c) = V.eval(a, c);
    k.L.col(c) = V.eval(a, c, 1, 0);
    k.L.col(c + 2) = V.eval(a, c, 0, 1);
    k.H.col(3 * c) = V.eval(a, c, 2, 0);
    k.H.col(3 * c + 1) = V.eval(a, c, 1, 1);
    k.H.col(3 * c + 2) = V.eval(a, c, 0, 2);
  }
  if (V.quadrature().has_boundary)
    for (int e = 0; e < 4; ++e) {
      k.edge_v[e].resize(V.quadrature().edge_size(e), 2);
      for (int c = 0; c < 2; ++c) k.edge_v[e].col(c) = V.eval_edge(a, c, e);
    }
  return k;
}

Kinematics kinematics_from_field(const Quadrature& q, const VelocityField& vel, const HessianField& hess) {
  const int N = q.grid.size();
  Kinematics k;
  k.v.resize(N, 2);
  k.L.resize(N, 4);
  k.H = Eigen::MatrixXd::Zero(N, 6);
  for (int n = 0; n < N; ++n) {
    const Vec2 x = q.grid.node(n);
    const VelocitySample s = vel(x);
    k.v.row(n) = s.v.transpose();
    k.L.row(n) << s.grad(0, 0), s.grad(1, 0), s.grad(0, 1), s.grad(1, 1);
    if (hess) {
      const auto h = hess(x);
      for (int c = 0; c < 2; ++c) k.H.row(n).segment<3>(3 * c) << h[c](0, 0), h[c](0, 1), h[c](1, 1);
    }
  }
  if (q.has_boundary)
    for (int e = 0; e < 4; ++e) {
      k.edge_v[e].resize(q.edge_size(e), 2);
      for (int m = 0; m < q.edge_size(e); ++m) k.edge_v[e].row(m) = vel(q.edge_node(e, m)).v.transpose();
    }
  return k;
}

Thermal thermal_from_coeffs(const GalerkinSpace& Z, const Eigen::VectorXd& a) {
  Thermal t;
  t.theta = Z.eval(a, 0);
  t.grad.resize(t.theta.size(), 2);
  t.grad.col(0) = Z.eval(a, 0, 1, 0);
  t.grad.col(1) = Z.eval(a, 0, 0, 1);
  if (Z.quadrature().has_boundary)
    for (int e = 0; e < 4; ++e) t.edge_theta[e] = Z.eval_edge(a, 0, e);
  return t;
}

PointwiseFields evaluate_constitutive(const Material<2>& m, const RegularizationParams& rp, const NodalState& s) {
  const int N = static_cast<int>(s.rho.size());
  PointwiseFields pw;
  pw.S.resize(N, 4);
  pw.Hs.resize(N, 6);
  for (auto* v : {&pw.diss, &pw.hyper, &pw.xi_eps, &pw.adiabatic, &pw.exchange, &pw.c, &pw.omega, &pw.eta,
                  &pw.kappa, &pw.stored, &pw.grav, &pw.pi, &pw.det})
    v->resize(N);
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (int n = 0; n < N; ++n) {
    const Mat2 F = unflatten(s.F, n);
    const double J = det<2, double>(F);
    if (!(J > 0.0)) {
      bad = true;
      continue;
    }
    const double th = s.th.theta(n);
    const Mat2 L = unflatten(s.kin.L, n);
    const Mat2 e = sym<2, double>(L);
    Ten3<2> Hv;
    for (int c = 0; c < 2; ++c) {
      Mat2 h;
      h << s.kin.H(n, 3 * c), s.kin.H(n, 3 * c + 1), s.kin.H(n, 3 * c + 1), s.kin.H(n, 3 * c + 2);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) Hv(c, j, k) = h(j, k);
    }
    const Ten3<2> G = sym_grad<2, double>(Hv);
    const Ten3<2> Hs = hyper_stress<2>(G, rp.nu, rp.p);
    for (int c = 0; c < 2; ++c) {
      pw.Hs(n, 3 * c) = Hs(c, 0, 0);
      pw.Hs(n, 3 * c + 1) = Hs(c, 0, 1) + Hs(c, 1, 0);
      pw.Hs(n, 3 * c + 2) = Hs(c, 1, 1);
    }
    const Mat2 D = m.dissipative_stress(F, th, e);
    const Mat2 S = regularized_stress<2>(m, F, th, rp) + D;
    pw.S.row(n) << S(0, 0), S(1, 0), S(0, 1), S(1, 1);
    pw.diss(n) = contract<2, double>(D, e);
    pw.hyper(n) = rp.nu * std::pow(frobenius<2, double>(G), rp.p);
    pw.xi_eps(n) = damped_heat_source<2>(D, e, G, rp);
    pw.adiabatic(n) = regularized_adiabatic_source<2>(m, F, th, e, rp);
    const Mat2 W = (m.gamma_F(F, th) - th * m.gamma_Ftheta(F, th)) * F.transpose() / J;
    pw.exchange(n) = contract<2, double>(W, e);
    pw.c(n) = m.heat_capacity(F, th);
    pw.omega(n) = m.enthalpy(F, th);
    pw.eta(n) = m.entropy(F, th);
    pw.kappa(n) = m.kappa(F, th);
    pw.stored(n) = regularized_stored_energy<2>(m, F, rp.lambda);
    pw.grav(n) = std::sqrt(std::max(0.0, s.rho_R(n) * s.rho(n) / det_lambda(J, rp.lambda)));
    pw.pi(n) = pi_lambda<2>(F, rp.lambda).value;
    pw.det(n) = J;
  }
  if (bad) throw Error(ErrorKind::InvalidState, "evaluate_constitutive: det F <= 0 at a quadrature node");
  return pw;
}

MomentumResidual assemble_momentum_residual(const GalerkinSpace& V, const NodalState& s, const PointwiseFields& pw,
                                            const Loads& loads, const RegularizationParams& rp,
                                            const AssemblyOptions& opt) {
  const Quadrature& q = V.quadrature();
  const double w = q.weight();
  const int n = V.dim();
  MomentumResidual r;
  for (auto* v : {&r.stress, &r.hyper, &r.convective, &r.gravity, &r.boundary}) *v = Eigen::VectorXd::Zero(n);
  if (opt.check_quadrature && q.grid.periodic && q.grid.nx % 2 == 0 && q.grid.ny % 2 == 0) {
    // compare the hyper-viscous power with the rule on every other node
    double full = 0.0, half = 0.0;
    for (int j = 0; j < q.grid.ny; ++j)
      for (int i = 0; i < q.grid.nx; ++i) {
        const double h = pw.hyper(i + q.grid.nx * j);
        full += h;
        if (i % 2 == 0 && j % 2 == 0) half += 4.0 * h;
      }
    if (full * q.weight() > opt.quadrature_floor && std::abs(full - half) > opt.quadrature_tol * full)
      throw Error(ErrorKind::QuadratureUnderResolved,
                  "hyper-viscous term differs by " + std::to_string(std::abs(full - half) / full) +
                      " between quadrature levels");
  }
  const Eigen::VectorXd& rho = s.rho;
  for (int c = 0; c < 2; ++c) {
    V.add_weak(-w * pw.S.col(c), c, 1, 0, r.stress);
    V.add_weak(-w * pw.S.col(c + 2), c, 0, 1, r.stress);
    V.add_weak(-w * pw.Hs.col(3 * c), c, 2, 0, r.hyper);
    V.add_weak(-w * pw.Hs.col(3 * c + 1), c, 1, 1, r.hyper);
    V.add_weak(-w * pw.Hs.col(3 * c + 2), c, 0, 2, r.hyper);
    const Eigen::VectorXd conv = (s.kin.v.col(0).array() * s.kin.L.col(c).array() +
                                  s.kin.v.col(1).array() * s.kin.L.col(c + 2).array())
                                     .matrix();
    V.add_weak(-w * rho.cwiseProduct(conv), c, 0, 0, r.convective);
    if (loads.g(c) != 0.0) V.add_weak((w * loads.g(c)) * pw.grav, c, 0, 0, r.gravity);
  }
  if (q.has_boundary) {
    for (int e = 0; e < 4; ++e) {
      const double we = q.edge_weight(e);
      for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd f =
            we * (Eigen::VectorXd::Constant(q.edge_size(e), loads.traction[e](c)) - rp.nu_flat * s.kin.edge_v[e].col(c));
        V.add_weak_edge(f, c, e, r.boundary);
      }
    }
  }
  return r;
}

BoundaryHeat boundary_heat(const Quadrature& q, const NodalState& s, const Loads& loads, const RegularizationParams& rp) {
  BoundaryHeat b;
  if (!q.has_boundary) return b;
  for (int e = 0; e < 4; ++e) {
    const int m = q.edge_size(e);
    b.flux[e].resize(m);
    b.viscous[e].resize(m);
    for (int i = 0; i < m; ++i) {
      const double v2 = s.kin.edge_v[e].row(i).squaredNorm();
      b.flux[e](i) = damped_flux(loads.h(s.th.edge_theta[e](i)), rp.epsilon);
      b.viscous[e](i) = rp.nu_flat * v2 / (2.0 + rp.epsilon * v2);
    }
  }
  return b;
}

Eigen::VectorXd assemble_heat_residual(const GalerkinSpace& Z, const NodalState& s, const PointwiseFields& pw,
                                       const Loads& loads, const RegularizationParams& rp) {
  const Quadrature& q = Z.quadrature();
  const double w = q.weight();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(Z.dim());
  for (int d = 0; d < 2; ++d) {
    const Eigen::VectorXd flux = pw.omega.cwiseProduct(s.kin.v.col(d)) - pw.kappa.cwiseProduct(s.th.grad.col(d));
    Z.add_weak(w * flux, 0, d == 0, d == 1, r);
  }
  Z.add_weak(w * (pw.xi_eps + pw.adiabatic), 0, 0, 0, r);
  if (q.has_boundary) {
    const BoundaryHeat b = boundary_heat(q, s, loads, rp);
    for (int e = 0; e < 4; ++e) Z.add_weak_edge(q.edge_weight(e) * (b.flux[e] + b.viscous[e]), 0, e, r);
  }
  return r;
}

HeatResidual assemble_heat_rate(const GalerkinSpace& Z, const NodalState& s, const PointwiseFields& pw,
                                const Loads& loads, const RegularizationParams& rp) {
  const Quadrature& q = Z.quadrature();
  const double w = q.weight();
  const int n = Z.dim();
  HeatResidual r;
  for (auto* v : {&r.sources, &r.convective, &r.conduction, &r.boundary}) *v = Eigen::VectorXd::Zero(n);
  Z.add_weak(w * (pw.xi_eps + pw.adiabatic - pw.exchange), 0, 0, 0, r.sources);
  const Eigen::VectorXd adv = (s.kin.v.col(0).array() * s.th.grad.col(0).array() +
                               s.kin.v.col(1).array() * s.th.grad.col(1).array())
                                  .matrix();
  Z.add_weak(-w * pw.c.cwiseProduct(adv), 0, 0, 0, r.convective);
  Z.add_weak(-w * pw.kappa.cwiseProduct(s.th.grad.col(0)), 0, 1, 0, r.conduction);
  Z.add_weak(-w * pw.kappa.cwiseProduct(s.th.grad.col(1)), 0, 0, 1, r.conduction);
  if (q.has_boundary) {
    const BoundaryHeat b = boundary_heat(q, s, loads, rp);
    for (int e = 0; e < 4; ++e) Z.add_weak_edge(q.edge_weight(e) * (b.flux[e] + b.viscous[e]), 0, e, r.boundary);
  }
  return r;
}

}  // namespace ekv
