#pragma once

#include "ekv/grid.hpp"
#include "ekv/materials.hpp"
#include "ekv/regularization.hpp"
#include "ekv/transport.hpp"

#include <array>
#include <functional>

namespace ekv {

enum class BcMode { SlipRectangle, Periodic };
enum class DomainShape { Rectangle, Disk };

struct Domain {
  double Lx = 1.0, Ly = 1.0;
  BcMode bc = BcMode::Periodic;
  DomainShape shape = DomainShape::Rectangle;
};

// 1D families on [0, L]:
//   Trig:   1, cos(2πmx/L), sin(2πmx/L), m = 1..k   (index 0, 2m-1, 2m)
//   Sine:   sin(mπx/L), m = 1..k
//   Cosine: cos(mπx/L), m = 0..k
enum class Family { Trig, Sine, Cosine };

struct Basis1D {
  Family family;
  int k;
  double L;
  int size() const;
  double eval(int a, double x, int deriv) const;
};

// Values and derivatives (orders 0..2) at the grid nodes and at both ends.
struct Tables1D {
  std::array<Eigen::MatrixXd, 3> B;       // B[d](i, a)
  std::array<Eigen::RowVectorXd, 3> lo;   // at x = 0
  std::array<Eigen::RowVectorXd, 3> hi;   // at x = L
};

// Boundary edges of the rectangle and their outward normals.
enum Edge { Left = 0, Right = 1, Bottom = 2, Top = 3 };
Vec2 edge_normal(int edge);

// Tensor-product quadrature on the cell-centred grid (midpoint rule per
// cell; exact for trigonometric polynomials below the grid's Nyquist limit)
// plus midpoint rules along the four edges.
struct Quadrature {
  Grid2D grid;
  bool has_boundary = false;
  double weight() const { return grid.cell_area(); }
  int edge_size(int edge) const { return edge < 2 ? grid.ny : grid.nx; }
  double edge_weight(int edge) const { return edge < 2 ? grid.hy() : grid.hx(); }
  Vec2 edge_node(int edge, int m) const;
};

Quadrature make_quadrature(const Domain& dom, int n);

// Span of tensor-product trigonometric functions, either a velocity space
// (2 components) or a scalar space.  Coefficients of component c form a
// column-major na × nb block starting at offset(c).
class GalerkinSpace {
 public:
  struct Component {
    Basis1D fx, fy;
    Tables1D tx, ty;
    int offset = 0;
    int na() const { return fx.size(); }
    int nb() const { return fy.size(); }
    int size() const { return na() * nb(); }
  };

  GalerkinSpace(std::vector<std::pair<Basis1D, Basis1D>> families, const Quadrature& q, BcMode bc, int k);

  int dim() const { return dim_; }
  int ncomp() const { return static_cast<int>(comps_.size()); }
  int k() const { return k_; }
  BcMode bc_mode() const { return bc_; }
  const Component& comp(int c) const { return comps_[c]; }
  const Quadrature& quadrature() const { return q_; }

  // ∂x^ox ∂y^oy of component c at the quadrature nodes
  Eigen::VectorXd eval(const Eigen::VectorXd& coeffs, int c, int ox = 0, int oy = 0) const;
  // component c along an edge
  Eigen::VectorXd eval_edge(const Eigen::VectorXd& coeffs, int c, int edge) const;
  // out_i += Σ_nodes W ∂x^ox ∂y^oy φ_i  (W carries the quadrature weight)
  void add_weak(const Eigen::VectorXd& W, int c, int ox, int oy, Eigen::VectorXd& out) const;
  void add_weak_edge(const Eigen::VectorXd& W, int c, int edge, Eigen::VectorXd& out) const;

  // Σ_nodes w φ_i φ_j over component c (w includes the quadrature weight)
  Eigen::MatrixXd weighted_gram(const Eigen::VectorXd& w, int c) const;
  // ∫ ∂^o1 φ_i(c1) ∂^o2 φ_j(c2) with uniform weight, as a c1-block × c2-block
  Eigen::MatrixXd derivative_gram(int c1, int ox1, int oy1, int c2, int ox2, int oy2) const;
  // full-space mass matrix with weight w (block diagonal over components)
  Eigen::MatrixXd mass(const Eigen::VectorXd& w) const;
  // ∫ ∇e(u)⋮∇e(u') for velocity spaces, ∫ ∇u·∇u' for scalar spaces
  Eigen::MatrixXd stiffness() const;

 private:
  std::vector<Component> comps_;
  Quadrature q_;
  BcMode bc_;
  int k_;
  int dim_ = 0;
};

// V_k: Fourier modes per component (periodic) or sine/cosine pairs with
// v·n = 0 on the walls (slip).  Throws UnsupportedDomain for non-rectangles
// and QuadratureUnderResolved when the grid cannot integrate basis products.
GalerkinSpace build_velocity_space(const Domain& dom, int k, const Quadrature& q);
// Z_k: Fourier (periodic) or full cosine basis (natural boundary condition).
GalerkinSpace build_temperature_space(const Domain& dom, int k, const Quadrature& q);

// L² projection of nodal values (N × ncomp) with optional nodal weights.
Eigen::VectorXd project(const GalerkinSpace& space, const Eigen::MatrixXd& values,
                        const Eigen::VectorXd* weights = nullptr);

// Velocity data at the quadrature nodes.
struct Kinematics {
  Eigen::MatrixXd v;  // N × 2
  Eigen::MatrixXd L;  // N × 4, ∇v column-major (L00, L10, L01, L11)
  Eigen::MatrixXd H;  // N × 6: ∂xx v0, ∂xy v0, ∂yy v0, ∂xx v1, ∂xy v1, ∂yy v1
  std::array<Eigen::MatrixXd, 4> edge_v;  // per edge, m × 2
};

struct Thermal {
  Eigen::VectorXd theta;
  Eigen::MatrixXd grad;  // N × 2
  std::array<Eigen::VectorXd, 4> edge_theta;
};

Kinematics kinematics_from_coeffs(const GalerkinSpace& V, const Eigen::VectorXd& coeffs);
using HessianField = std::function<std::array<Mat2, 2>(const Vec2&)>;
Kinematics kinematics_from_field(const Quadrature& q, const VelocityField& v, const HessianField& hess = {});
Thermal thermal_from_coeffs(const GalerkinSpace& Z, const Eigen::VectorXd& coeffs);

struct NodalState {
  Eigen::VectorXd rho;    // N
  Eigen::MatrixXd F;      // N × 4 column-major
  Eigen::VectorXd rho_R;  // N
  Kinematics kin;
  Thermal th;
};

inline Mat2 unflatten(const Eigen::MatrixXd& M, int n) {
  Mat2 A;
  A << M(n, 0), M(n, 2), M(n, 1), M(n, 3);
  return A;
}

// Body force, tangential traction per edge and Robin-type heat exchange
// h(θ) = β(θ_ext - θ) (mirrored to |θ| for θ < 0).
struct Loads {
  Vec2 g = Vec2::Zero();
  std::array<Vec2, 4> traction{Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  double beta = 0.0;
  double theta_ext = 0.0;
  double h(double theta) const { return beta * (theta_ext - std::abs(theta)); }
};

// Constitutive quantities at the quadrature nodes; the mechanical and thermal
// balances and the ledger all read from the same arrays.
struct PointwiseFields {
  Eigen::MatrixXd S;       // N × 4: T_{λ,ε} + D
  Eigen::MatrixXd Hs;      // N × 6: hyper-stress weights per component (xx, xy, yy)
  Eigen::VectorXd diss;    // D:e
  Eigen::VectorXd hyper;   // ν|∇e|^p
  Eigen::VectorXd xi_eps;  // damped heat source
  Eigen::VectorXd adiabatic;  // π_λ γ_F'Fᵀ/((1+ε|θ|)det F) : e
  Eigen::VectorXd exchange;   // (γ_F' - θγ_Fθ'')Fᵀ/det F : e
  Eigen::VectorXd c, omega, eta, kappa;
  Eigen::VectorXd stored;     // π_λ φ/det F
  Eigen::VectorXd grav;       // √(ρ_R ρ / det_λ F)
  Eigen::VectorXd pi;         // π_λ(F)
  Eigen::VectorXd det;        // det F
};

PointwiseFields evaluate_constitutive(const Material<2>& m, const RegularizationParams& rp,
                                      const NodalState& s);

struct MomentumResidual {
  Eigen::VectorXd stress, hyper, convective, gravity, boundary;
  Eigen::VectorXd total() const { return stress + hyper + convective + gravity + boundary; }
  Eigen::VectorXd explicit_part() const { return stress + convective + gravity + boundary; }
};

struct AssemblyOptions {
  bool check_quadrature = true;
  double quadrature_tol = 1e-2;
  double quadrature_floor = 1e-24;  // hyper-viscous power below this is round-off
};

// Right-hand side of M_ρ v̇ = R tested against every basis function:
// R = -∫(T+D):e(ṽ) - ∫H⋮∇e(ṽ) - ∫ρ(v·∇)v·ṽ + ∫√(ρ_Rρ/det_λ F) g·ṽ + ∮(f - ν_♭ v)·ṽ.
MomentumResidual assemble_momentum_residual(const GalerkinSpace& V, const NodalState& s,
                                            const PointwiseFields& pw, const Loads& loads,
                                            const RegularizationParams& rp,
                                            const AssemblyOptions& opt = {});

// Enthalpy form: ∫(ωv - κ∇θ)·∇θ̃ + ∫(ξ_ε + adiabatic)θ̃ + ∮(h_ε + ν_♭|v|²/(2+ε|v|²))θ̃,
// which equals ∫ ∂t ω θ̃ for a solution.
Eigen::VectorXd assemble_heat_residual(const GalerkinSpace& Z, const NodalState& s,
                                       const PointwiseFields& pw, const Loads& loads,
                                       const RegularizationParams& rp);

// Heat-capacity form used for time stepping, M_c θ̇ = Q with
// Q = ∫(ξ_ε + adiabatic - exchange - c v·∇θ)θ̃ - ∫κ∇θ·∇θ̃ + boundary.
struct HeatResidual {
  Eigen::VectorXd sources, convective, conduction, boundary;
  Eigen::VectorXd total() const { return sources + convective + conduction + boundary; }
  Eigen::VectorXd explicit_part() const { return sources + convective + boundary; }
};

HeatResidual assemble_heat_rate(const GalerkinSpace& Z, const NodalState& s, const PointwiseFields& pw,
                                const Loads& loads, const RegularizationParams& rp);

// Heat entering through each edge node: h_ε(θ) and ν_♭|v|²/(2+ε|v|²).
struct BoundaryHeat {
  std::array<Eigen::VectorXd, 4> flux, viscous;
};
BoundaryHeat boundary_heat(const Quadrature& q, const NodalState& s, const Loads& loads,
                           const RegularizationParams& rp);

}  // namespace ekv
