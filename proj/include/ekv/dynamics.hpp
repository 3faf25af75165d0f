#pragma once

#include "ekv/galerkin.hpp"
#include "ekv/materials.hpp"
#include "ekv/regularization.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ekv {

enum class TimeScheme { ImexArs232, RK4, ForwardEuler };
int nominal_order(TimeScheme s);

struct IntegratorSettings {
  TimeScheme scheme = TimeScheme::ImexArs232;
  double dt = 1e-3;  // fixed step, or the largest step when adaptive
  double dt_min = 1e-8;
  bool adaptive = false;
  double tol = 1e-6;  // step-doubling error tolerance
  double t_end = 1.0;
  double solver_tol = 1e-12;  // implicit stage and mass solves, relative
  int solver_max_iter = 60;
  double mass_refactor = 1e-2;  // relative weight change that triggers refactoring
  double max_wall_seconds = 0.0;  // 0: unlimited
};

enum class VelocityInit { Zero, ShearWave, TaylorGreen, Translation, Compression };

struct InitialData {
  double rho_R = 1.0;
  Mat2 F0 = Mat2::Identity();
  VelocityInit velocity = VelocityInit::Zero;
  double v_amplitude = 0.0;
  int v_mode = 1;
  Vec2 translation = Vec2::Zero();
  double theta_mean = 1.0;
  double theta_amplitude = 0.0;
  int theta_mode = 1;
};

// Optional closed-form velocity replacing the momentum equation.
enum class PrescribedVelocity { None, RigidRotation };

struct Scenario {
  std::string name = "scenario";
  Domain domain;
  int k = 8;   // Galerkin order
  int n = 64;  // collocation / quadrature nodes per direction
  MaterialPtr<2> material;
  RegularizationParams reg;
  Loads loads;
  InitialData init;
  PrescribedVelocity prescribed = PrescribedVelocity::None;
  double omega = 0.0;  // angular velocity for the rigid rotation, about the box centre
  IntegratorSettings integ;
  bool track_inverse_det = false;
  bool track_return_map = false;
  AssemblyOptions assembly;
};

// Coefficients of v ∈ V_k and θ ∈ Z_k plus nodal ρ, F (and optional
// transported 1/det F and return map ξ).
struct State {
  Eigen::VectorXd v;
  Eigen::VectorXd theta;
  Eigen::VectorXd rho;
  Eigen::MatrixXd F;        // N × 4 column-major
  Eigen::VectorXd inv_det;  // empty unless tracked
  Eigen::MatrixXd xi;       // N × 2, empty unless tracked
  double t = 0.0;
};

// Everything evaluated at one state.
struct Evaluation {
  NodalState nodal;
  PointwiseFields pw;
  MomentumResidual momentum;
  HeatResidual heat;
};

struct StepStats {
  int mass_factorizations = 0;
  int implicit_iterations = 0;
  int rejected_steps = 0;
  int accepted_steps = 0;
};

class Model {
 public:
  explicit Model(Scenario sc);
  ~Model();
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const Scenario& scenario() const { return sc_; }
  const Quadrature& quadrature() const { return q_; }
  const GalerkinSpace& velocity_space() const { return V_; }
  const GalerkinSpace& temperature_space() const { return Z_; }
  const GridDerivative& derivative() const { return D_; }
  const Eigen::VectorXd& rho_R() const { return rho_R_; }
  StepStats& stats() { return stats_; }

  // Initial state: projected v0, mollified θ0, F0 and ρ0 = ρ_R/det F0.
  State initial_state() const;

  Evaluation evaluate(const State& s) const;
  Kinematics kinematics(const State& s) const;

  // Coefficients of v̇ = M_ρ⁻¹R and θ̇ = M_c⁻¹Q.
  Eigen::VectorXd momentum_rhs(const State& s);
  Eigen::VectorXd heat_rhs(const State& s);

  // Flat packing used by the time integrators.
  Eigen::VectorXd pack(const State& s) const;
  State unpack(const Eigen::VectorXd& y, double t) const;

  // One step of size dt from s.  Throws StepRejected (with a suggested dt)
  // when an intermediate state leaves the admissible set, InvalidState when
  // no smaller step is possible.
  State step(const State& s, double dt, const Evaluation* at_s = nullptr);

  struct Impl;

 private:
  friend struct StepperAccess;
  Scenario sc_;
  Quadrature q_;
  GalerkinSpace V_, Z_;
  GridDerivative D_;
  Eigen::VectorXd rho_R_;
  StepStats stats_;
  std::unique_ptr<Impl> impl_;
};

State step(Model& m, const State& s, double dt);
Eigen::VectorXd momentum_rhs(Model& m, const State& s);
Eigen::VectorXd heat_rhs(Model& m, const State& s);

}  // namespace ekv
