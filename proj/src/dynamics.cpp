#include "ekv/dynamics.hpp"

#include "ekv/errors.hpp"

#include <cmath>

namespace ekv {

int nominal_order(TimeScheme s) {
  switch (s) {
    case TimeScheme::ImexArs232: return 2;
    case TimeScheme::RK4: return 4;
    case TimeScheme::ForwardEuler: return 1;
  }
  return 1;
}

namespace {

struct MassCache {
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::MatrixXd M;
  Eigen::VectorXd w;
  bool valid = false;
  int version = 0;
};

struct Precond {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double a = -1.0, cbar = -1.0;
  int mass_version = -1;
  bool valid = false;
};

Eigen::VectorXd apply_mass(const GalerkinSpace& S, const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(S.dim());
  for (int c = 0; c < S.ncomp(); ++c) S.add_weak(w.cwiseProduct(S.eval(x, c)), c, 0, 0, out);
  return out;
}

}  // namespace

struct Model::Impl {
  Eigen::MatrixXd Kv, Kz;
  MassCache mv, mz;
  Precond pv, pz;
  int nv = 0, nz = 0, N = 0;
  int off_theta = 0, off_rho = 0, off_F = 0, off_inv = 0, off_xi = 0, size = 0;
};

Model::Model(Scenario sc)
    : sc_(std::move(sc)),
      q_(make_quadrature(sc_.domain, sc_.n)),
      V_(build_velocity_space(sc_.domain, sc_.k, q_)),
      Z_(build_temperature_space(sc_.domain, sc_.k, q_)),
      D_(q_.grid),
      impl_(std::make_unique<Impl>()) {
  if (!sc_.material) throw Error(ErrorKind::ValidationError, "scenario has no material");
  rho_R_ = Eigen::VectorXd::Constant(q_.grid.size(), sc_.init.rho_R);
  Impl& I = *impl_;
  I.Kv = V_.stiffness();
  I.Kz = Z_.stiffness();
  I.nv = V_.dim();
  I.nz = Z_.dim();
  I.N = q_.grid.size();
  I.off_theta = I.nv;
  I.off_rho = I.off_theta + I.nz;
  I.off_F = I.off_rho + I.N;
  I.off_inv = I.off_F + 4 * I.N;
  I.off_xi = I.off_inv + (sc_.track_inverse_det ? I.N : 0);
  I.size = I.off_xi + (sc_.track_return_map ? 2 * I.N : 0);
}

Model::~Model() = default;

Eigen::VectorXd Model::pack(const State& s) const {
  const Impl& I = *impl_;
  Eigen::VectorXd y(I.size);
  y.segment(0, I.nv) = s.v;
  y.segment(I.off_theta, I.nz) = s.theta;
  y.segment(I.off_rho, I.N) = s.rho;
  for (int c = 0; c < 4; ++c) y.segment(I.off_F + c * I.N, I.N) = s.F.col(c);
  if (sc_.track_inverse_det) y.segment(I.off_inv, I.N) = s.inv_det;
  if (sc_.track_return_map)
    for (int c = 0; c < 2; ++c) y.segment(I.off_xi + c * I.N, I.N) = s.xi.col(c);
  return y;
}

State Model::unpack(const Eigen::VectorXd& y, double t) const {
  const Impl& I = *impl_;
  State s;
  s.v = y.segment(0, I.nv);
  s.theta = y.segment(I.off_theta, I.nz);
  s.rho = y.segment(I.off_rho, I.N);
  s.F.resize(I.N, 4);
  for (int c = 0; c < 4; ++c) s.F.col(c) = y.segment(I.off_F + c * I.N, I.N);
  if (sc_.track_inverse_det) s.inv_det = y.segment(I.off_inv, I.N);
  if (sc_.track_return_map) {
    s.xi.resize(I.N, 2);
    for (int c = 0; c < 2; ++c) s.xi.col(c) = y.segment(I.off_xi + c * I.N, I.N);
  }
  s.t = t;
  return s;
}

namespace {

Vec2 initial_velocity(const Scenario& sc, const Vec2& x) {
  const InitialData& in = sc.init;
  const double A = in.v_amplitude, Lx = sc.domain.Lx, Ly = sc.domain.Ly;
  const bool per = sc.domain.bc == BcMode::Periodic;
  const double kx = (per ? 2.0 : 1.0) * M_PI * in.v_mode / Lx;
  const double ky = (per ? 2.0 : 1.0) * M_PI * in.v_mode / Ly;
  switch (in.velocity) {
    case VelocityInit::Zero: return Vec2::Zero();
    case VelocityInit::ShearWave: return Vec2(A * std::sin(kx * x.y() * Lx / Ly), 0.0);
    case VelocityInit::TaylorGreen:
      return A * Vec2(std::sin(kx * x.x()) * std::cos(ky * x.y()), -std::cos(kx * x.x()) * std::sin(ky * x.y()));
    case VelocityInit::Translation: return in.translation;
    case VelocityInit::Compression:
      return Vec2(-A * std::sin(2.0 * M_PI * in.v_mode * x.x() / Lx), 0.0);
  }
  return Vec2::Zero();
}

double initial_temperature(const Scenario& sc, const Vec2& x) {
  const InitialData& in = sc.init;
  const double k = (sc.domain.bc == BcMode::Periodic ? 2.0 : 1.0) * M_PI * in.theta_mode / sc.domain.Lx;
  return in.theta_mean + in.theta_amplitude * std::cos(k * x.x());
}

}  // namespace

State Model::initial_state() const {
  const Impl& I = *impl_;
  const Grid2D& g = q_.grid;
  State s;
  const double J0 = det<2, double>(sc_.init.F0);
  if (!(J0 > 0.0)) throw Error(ErrorKind::ValidationError, "initial F0 must have positive determinant");
  s.F.resize(I.N, 4);
  for (int n = 0; n < I.N; ++n) s.F.row(n) << sc_.init.F0(0, 0), sc_.init.F0(1, 0), sc_.init.F0(0, 1), sc_.init.F0(1, 1);
  s.rho = rho_R_ / J0;
  Eigen::MatrixXd v0(I.N, 2), th0(I.N, 1);
  for (int n = 0; n < I.N; ++n) {
    v0.row(n) = initial_velocity(sc_, g.node(n)).transpose();
    th0(n, 0) = mollified_initial_temperature(initial_temperature(sc_, g.node(n)), sc_.reg.epsilon);
  }
  s.v = sc_.prescribed == PrescribedVelocity::None ? project(V_, v0) : Eigen::VectorXd::Zero(I.nv);
  s.theta = project(Z_, th0);
  if (sc_.track_inverse_det) s.inv_det = Eigen::VectorXd::Constant(I.N, 1.0 / J0);
  if (sc_.track_return_map) {
    s.xi.resize(I.N, 2);
    for (int n = 0; n < I.N; ++n) s.xi.row(n) = g.node(n).transpose();
  }
  s.t = 0.0;
  return s;
}

Kinematics Model::kinematics(const State& s) const {
  if (sc_.prescribed == PrescribedVelocity::RigidRotation) {
    const Vec2 c(0.5 * sc_.domain.Lx, 0.5 * sc_.domain.Ly);
    const double w = sc_.omega;
    VelocityField vel = [c, w](const Vec2& x) {
      VelocitySample r;
      r.v = w * Vec2(-(x.y() - c.y()), x.x() - c.x());
      r.grad << 0.0, -w, w, 0.0;
      return r;
    };
    return kinematics_from_field(q_, vel);
  }
  return kinematics_from_coeffs(V_, s.v);
}

Evaluation Model::evaluate(const State& s) const {
  Evaluation ev;
  ev.nodal.rho = s.rho;
  ev.nodal.F = s.F;
  ev.nodal.rho_R = rho_R_;
  ev.nodal.kin = kinematics(s);
  ev.nodal.th = thermal_from_coeffs(Z_, s.theta);
  ev.pw = evaluate_constitutive(*sc_.material, sc_.reg, ev.nodal);
  if (sc_.prescribed == PrescribedVelocity::None)
    ev.momentum = assemble_momentum_residual(V_, ev.nodal, ev.pw, sc_.loads, sc_.reg, sc_.assembly);
  ev.heat = assemble_heat_rate(Z_, ev.nodal, ev.pw, sc_.loads, sc_.reg);
  return ev;
}

namespace {

// Factor the weighted mass matrix when the weight has drifted; solve by
// iterative refinement against the current weight otherwise.
Eigen::VectorXd solve_mass(MassCache& mc, const GalerkinSpace& S, const Eigen::VectorXd& w, const Eigen::VectorXd& b,
                           const IntegratorSettings& is, bool heat, StepStats& stats) {
  auto factor = [&] {
    if (!(w.minCoeff() > 0.0)) {
      if (heat) throw Error(ErrorKind::DegenerateHeatCapacity, "heat capacity is not positive at a quadrature node");
      throw Error(ErrorKind::SingularMass, "density is not positive at a quadrature node");
    }
    mc.M = S.mass(w);
    mc.llt.compute(mc.M);
    if (mc.llt.info() != Eigen::Success || mc.llt.rcond() < 1e-14) {
      if (heat) throw Error(ErrorKind::DegenerateHeatCapacity, "heat-capacity weighted mass matrix is singular");
      throw Error(ErrorKind::SingularMass, "density weighted mass matrix is singular");
    }
    mc.w = w;
    mc.valid = true;
    ++mc.version;
    ++stats.mass_factorizations;
  };
  if (!mc.valid || (w - mc.w).cwiseAbs().maxCoeff() > is.mass_refactor * mc.w.cwiseAbs().maxCoeff()) factor();
  const double bn = b.cwiseAbs().maxCoeff();
  if (bn == 0.0) return Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd x = mc.llt.solve(b);
  for (int it = 0; it < is.solver_max_iter; ++it) {
    const Eigen::VectorXd r = b - apply_mass(S, w, x);
    if (r.cwiseAbs().maxCoeff() <= is.solver_tol * bn) return x;
    x += mc.llt.solve(r);
  }
  factor();
  return mc.llt.solve(b);
}

Eigen::VectorXd hyper_residual(const GalerkinSpace& V, const Eigen::VectorXd& a, const RegularizationParams& rp,
                               double* gmax = nullptr) {
  const Quadrature& q = V.quadrature();
  const int N = q.grid.size();
  Eigen::MatrixXd H(N, 6);
  for (int c = 0; c < 2; ++c) {
    H.col(3 * c) = V.eval(a, c, 2, 0);
    H.col(3 * c + 1) = V.eval(a, c, 1, 1);
    H.col(3 * c + 2) = V.eval(a, c, 0, 2);
  }
  Eigen::MatrixXd W(N, 6);
  double gm = 0.0;
  for (int n = 0; n < N; ++n) {
    Ten3<2> Hv;
    for (int c = 0; c < 2; ++c) {
      Hv(c, 0, 0) = H(n, 3 * c);
      Hv(c, 0, 1) = Hv(c, 1, 0) = H(n, 3 * c + 1);
      Hv(c, 1, 1) = H(n, 3 * c + 2);
    }
    const Ten3<2> G = sym_grad<2, double>(Hv);
    gm = std::max(gm, frobenius<2, double>(G));
    const Ten3<2> Hs = hyper_stress<2>(G, rp.nu, rp.p);
    for (int c = 0; c < 2; ++c) {
      W(n, 3 * c) = Hs(c, 0, 0);
      W(n, 3 * c + 1) = Hs(c, 0, 1) + Hs(c, 1, 0);
      W(n, 3 * c + 2) = Hs(c, 1, 1);
    }
  }
  if (gmax) *gmax = gm;
  const double w = q.weight();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(V.dim());
  for (int c = 0; c < 2; ++c) {
    V.add_weak(-w * W.col(3 * c), c, 2, 0, r);
    V.add_weak(-w * W.col(3 * c + 1), c, 1, 1, r);
    V.add_weak(-w * W.col(3 * c + 2), c, 0, 2, r);
  }
  return r;
}

}  // namespace

Eigen::VectorXd Model::momentum_rhs(const State& s) {
  if (sc_.prescribed != PrescribedVelocity::None) return Eigen::VectorXd::Zero(impl_->nv);
  const Evaluation ev = evaluate(s);
  return solve_mass(impl_->mv, V_, s.rho * q_.weight(), ev.momentum.total(), sc_.integ, false, stats_);
}

Eigen::VectorXd Model::heat_rhs(const State& s) {
  const Evaluation ev = evaluate(s);
  return solve_mass(impl_->mz, Z_, ev.pw.c * q_.weight(), ev.heat.total(), sc_.integ, true, stats_);
}

Eigen::VectorXd momentum_rhs(Model& m, const State& s) { return m.momentum_rhs(s); }
Eigen::VectorXd heat_rhs(Model& m, const State& s) { return m.heat_rhs(s); }

namespace {

struct Rates {
  Eigen::VectorXd ex, im;
};

}  // namespace

// Time integration lives in the implementation struct so that the caches
// can be reused across stages.
struct StepperAccess {
  static void check_admissible(const Model& m, const Eigen::VectorXd& y, double dt) {
    const auto& I = *m.impl_;
    const double lam = m.scenario().reg.lambda;
    if (!y.allFinite()) throw StepRejected("non-finite value in state", 0.5 * dt);
    for (int n = 0; n < I.N; ++n) {
      const double rho = y(I.off_rho + n);
      const double J = y(I.off_F + n) * y(I.off_F + 3 * I.N + n) - y(I.off_F + 2 * I.N + n) * y(I.off_F + I.N + n);
      if (!(rho > 0.0)) throw StepRejected("density lost positivity", 0.5 * dt);
      if (!(J > 0.25 * lam)) throw StepRejected("det F fell below lambda/4", 0.5 * dt);
    }
  }

  // Explicit and implicit parts of dy/dt at y; `ev` is the evaluation at y.
  static Rates rates(Model& m, const Eigen::VectorXd& y, const Evaluation& ev, bool want_implicit) {
    auto& I = *m.impl_;
    const Scenario& sc = m.sc_;
    const double wq = m.q_.weight();
    Rates r;
    r.ex = Eigen::VectorXd::Zero(I.size);
    r.im = Eigen::VectorXd::Zero(I.size);
    const Eigen::VectorXd rho = y.segment(I.off_rho, I.N);
    if (sc.prescribed == PrescribedVelocity::None) {
      const Eigen::VectorXd w = rho * wq;
      r.ex.segment(0, I.nv) = solve_mass(I.mv, m.V_, w, ev.momentum.explicit_part(), sc.integ, false, m.stats_);
      if (want_implicit)
        r.im.segment(0, I.nv) = solve_mass(I.mv, m.V_, w, ev.momentum.hyper, sc.integ, false, m.stats_);
    }
    const Eigen::VectorXd wc = ev.pw.c * wq;
    r.ex.segment(I.off_theta, I.nz) = solve_mass(I.mz, m.Z_, wc, ev.heat.explicit_part(), sc.integ, true, m.stats_);
    if (want_implicit)
      r.im.segment(I.off_theta, I.nz) = solve_mass(I.mz, m.Z_, wc, ev.heat.conduction, sc.integ, true, m.stats_);
    // transport of the collocation fields
    const Eigen::MatrixXd& v = ev.nodal.kin.v;
    const Eigen::MatrixXd& L = ev.nodal.kin.L;
    {
      Eigen::MatrixXd z = rho;
      r.ex.segment(I.off_rho, I.N) = transport_rate(rhs_catalog(FieldKind::Density), m.D_, z, v, L);
    }
    {
      Eigen::MatrixXd z(I.N, 4);
      for (int c = 0; c < 4; ++c) z.col(c) = y.segment(I.off_F + c * I.N, I.N);
      const Eigen::MatrixXd dz = transport_rate(rhs_catalog(FieldKind::DeformationGradient), m.D_, z, v, L);
      for (int c = 0; c < 4; ++c) r.ex.segment(I.off_F + c * I.N, I.N) = dz.col(c);
    }
    if (sc.track_inverse_det) {
      Eigen::MatrixXd z = y.segment(I.off_inv, I.N);
      r.ex.segment(I.off_inv, I.N) = transport_rate(rhs_catalog(FieldKind::InverseDet), m.D_, z, v, L);
    }
    if (sc.track_return_map) {
      Eigen::MatrixXd z(I.N, 2);
      for (int c = 0; c < 2; ++c) z.col(c) = y.segment(I.off_xi + c * I.N, I.N);
      const Eigen::MatrixXd dz = transport_rate(rhs_catalog(FieldKind::ReturnMap), m.D_, z, v, L);
      for (int c = 0; c < 2; ++c) r.ex.segment(I.off_xi + c * I.N, I.N) = dz.col(c);
    }
    return r;
  }

  // Solve M(y)(y - y*) = a R_im(y) for the v and θ blocks; other blocks are y*.
  static Eigen::VectorXd implicit_solve(Model& m, const Eigen::VectorXd& ystar, double a) {
    auto& I = *m.impl_;
    const Scenario& sc = m.sc_;
    const IntegratorSettings& is = sc.integ;
    const double wq = m.q_.weight();
    Eigen::VectorXd y = ystar;
    if (sc.prescribed == PrescribedVelocity::None && sc.reg.nu > 0.0) {
      const Eigen::VectorXd w = ystar.segment(I.off_rho, I.N) * wq;
      const Eigen::VectorXd vs = ystar.segment(0, I.nv);
      // make sure the mass cache is current for this density
      solve_mass(I.mv, m.V_, w, Eigen::VectorXd::Zero(I.nv), is, false, m.stats_);
      double gmax = 0.0;
      Eigen::VectorXd Rh = hyper_residual(m.V_, vs, sc.reg, &gmax);
      const double cbar = sc.reg.nu * (sc.reg.p - 1.0) * std::pow(gmax, sc.reg.p - 2.0);
      Precond& P = I.pv;
      if (!P.valid || P.a != a || P.mass_version != I.mv.version || cbar > 1.5 * P.cbar || cbar < 0.25 * P.cbar) {
        P.llt.compute(I.mv.M + (a * std::max(cbar, 1e-300)) * I.Kv);
        P.a = a;
        P.cbar = std::max(cbar, 1e-300);
        P.mass_version = I.mv.version;
        P.valid = true;
      }
      Eigen::VectorXd v = vs;
      const double scale = std::max(apply_mass(m.V_, w, vs).cwiseAbs().maxCoeff(), 1e-300);
      bool converged = false;
      for (int it = 0; it < 4 * is.solver_max_iter; ++it) {
        if (it > 0) Rh = hyper_residual(m.V_, v, sc.reg);
        const Eigen::VectorXd r = apply_mass(m.V_, w, v - vs) - a * Rh;
        ++m.stats_.implicit_iterations;
        if (r.cwiseAbs().maxCoeff() <= is.solver_tol * scale) {
          converged = true;
          break;
        }
        v -= P.llt.solve(r);
      }
      if (!converged) throw StepRejected("implicit hyper-viscous stage did not converge", 0.5 * a);
      y.segment(0, I.nv) = v;
    }
    {
      Eigen::MatrixXd F(I.N, 4);
      for (int c = 0; c < 4; ++c) F.col(c) = ystar.segment(I.off_F + c * I.N, I.N);
      const Eigen::VectorXd ts = ystar.segment(I.off_theta, I.nz);
      Eigen::VectorXd th = ts;
      const Material<2>& mat = *sc.material;
      Eigen::VectorXd wc(I.N), kap(I.N);
      auto nodal = [&](const Eigen::VectorXd& coeffs) {
        const Eigen::VectorXd tn = m.Z_.eval(coeffs, 0);
        for (int n = 0; n < I.N; ++n) {
          const Mat2 Fn = unflatten(F, n);
          wc(n) = mat.heat_capacity(Fn, tn(n)) * wq;
          kap(n) = mat.kappa(Fn, tn(n)) * wq;
        }
      };
      auto conduction = [&](const Eigen::VectorXd& coeffs) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(I.nz);
        m.Z_.add_weak(-kap.cwiseProduct(m.Z_.eval(coeffs, 0, 1, 0)), 0, 1, 0, r);
        m.Z_.add_weak(-kap.cwiseProduct(m.Z_.eval(coeffs, 0, 0, 1)), 0, 0, 1, r);
        return r;
      };
      nodal(th);
      solve_mass(I.mz, m.Z_, wc, Eigen::VectorXd::Zero(I.nz), is, true, m.stats_);
      const double kbar = kap.maxCoeff() / wq;
      Precond& P = I.pz;
      if (!P.valid || P.a != a || P.mass_version != I.mz.version || kbar != P.cbar) {
        P.llt.compute(I.mz.M + (a * kbar) * I.Kz);
        P.a = a;
        P.cbar = kbar;
        P.mass_version = I.mz.version;
        P.valid = true;
      }
      const double scale = std::max(apply_mass(m.Z_, wc, ts).cwiseAbs().maxCoeff(), 1e-300);
      bool converged = false;
      for (int it = 0; it < 4 * is.solver_max_iter; ++it) {
        if (it > 0) nodal(th);
        const Eigen::VectorXd r = apply_mass(m.Z_, wc, th - ts) - a * conduction(th);
        ++m.stats_.implicit_iterations;
        if (r.cwiseAbs().maxCoeff() <= is.solver_tol * scale) {
          converged = true;
          break;
        }
        th -= P.llt.solve(r);
      }
      if (!converged) throw StepRejected("implicit conduction stage did not converge", 0.5 * a);
      y.segment(I.off_theta, I.nz) = th;
    }
    return y;
  }

  static Evaluation eval_packed(Model& m, const Eigen::VectorXd& y, double t, double dt) {
    check_admissible(m, y, dt);
    try {
      return m.evaluate(m.unpack(y, t));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidState) throw StepRejected(e.what(), 0.5 * dt);
      throw;
    }
  }

  static State step(Model& m, const State& s, double dt, const Evaluation* at_s) {
    const Eigen::VectorXd y0 = m.pack(s);
    const double t = s.t;
    const TimeScheme scheme = m.sc_.integ.scheme;
    auto eval_at = [&](const Eigen::VectorXd& y, double tt) { return eval_packed(m, y, tt, dt); };
    const Evaluation e0 = at_s ? *at_s : eval_at(y0, t);
    Eigen::VectorXd y1;
    if (scheme == TimeScheme::ForwardEuler) {
      const Rates r = rates(m, y0, e0, true);
      y1 = y0 + dt * (r.ex + r.im);
    } else if (scheme == TimeScheme::RK4) {
      const Rates r1 = rates(m, y0, e0, true);
      const Eigen::VectorXd k1 = r1.ex + r1.im;
      const Eigen::VectorXd ya = y0 + 0.5 * dt * k1;
      const Rates r2 = rates(m, ya, eval_at(ya, t + 0.5 * dt), true);
      const Eigen::VectorXd k2 = r2.ex + r2.im;
      const Eigen::VectorXd yb = y0 + 0.5 * dt * k2;
      const Rates r3 = rates(m, yb, eval_at(yb, t + 0.5 * dt), true);
      const Eigen::VectorXd k3 = r3.ex + r3.im;
      const Eigen::VectorXd yc = y0 + dt * k3;
      const Rates r4 = rates(m, yc, eval_at(yc, t + dt), true);
      const Eigen::VectorXd k4 = r4.ex + r4.im;
      y1 = y0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      // ARS(2,3,2): stiffly accurate L-stable implicit part, γ = 1 - 1/√2.
      const double g = 1.0 - 1.0 / std::sqrt(2.0);
      const double d = -2.0 * std::sqrt(2.0) / 3.0;
      const Eigen::VectorXd E1 = rates(m, y0, e0, false).ex;
      Eigen::VectorXd ys = y0 + dt * g * E1;
      check_admissible(m, ys, dt);
      const Eigen::VectorXd Y2 = implicit_solve(m, ys, dt * g);
      const Eigen::VectorXd I2 = (Y2 - ys) / (dt * g);
      const Eigen::VectorXd E2 = rates(m, Y2, eval_at(Y2, t + g * dt), false).ex;
      ys = y0 + dt * (d * E1 + (1.0 - d) * E2) + dt * (1.0 - g) * I2;
      check_admissible(m, ys, dt);
      const Eigen::VectorXd Y3 = implicit_solve(m, ys, dt * g);
      const Eigen::VectorXd I3 = (Y3 - ys) / (dt * g);
      const Eigen::VectorXd E3 = rates(m, Y3, eval_at(Y3, t + dt), false).ex;
      y1 = y0 + dt * ((1.0 - g) * (E2 + I2) + g * (E3 + I3));
    }
    check_admissible(m, y1, dt);
    return m.unpack(y1, t + dt);
  }
};

State Model::step(const State& s, double dt, const Evaluation* at_s) {
  return StepperAccess::step(*this, s, dt, at_s);
}

State step(Model& m, const State& s, double dt) { return m.step(s, dt); }

}  // namespace ekv
