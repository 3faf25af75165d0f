#pragma once

#include "ekv/grid.hpp"
#include "ekv/tensors.hpp"

#include <functional>
#include <string>

namespace ekv {

// Eulerian fields obeying ż = b(∇v, z) with b bilinear.
enum class FieldKind {
  DeformationGradient,  // Ḟ = (∇v)F
  Density,              // ρ̇ = -ρ div v
  InverseDensity,       // (1/ρ)˙ = (1/ρ) div v
  InverseDet,           // (1/det F)˙ = -(1/det F) div v
  ReturnMap,            // ξ̇ = 0
  InverseDeformation    // (F⁻¹)˙ = -F⁻¹ ∇v
};

int component_count(FieldKind kind);
const char* to_string(FieldKind kind);

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

// b(L, z) = B(L) z.  Matrix fields are stored column-major: [z00 z10 z01 z11].
struct BilinearRHS {
  FieldKind kind;
  int ncomp;
  SmallMat matrix(const Mat2& L) const;
  SmallVec operator()(const Mat2& L, const SmallVec& z) const { return matrix(L) * z; }
};

BilinearRHS rhs_catalog(FieldKind kind);

struct TransportField {
  FieldKind kind;
  Grid2D grid;
  Eigen::MatrixXd values;  // grid.size() × component_count(kind)

  TransportField() = default;
  TransportField(FieldKind k, const Grid2D& g);
  int ncomp() const { return static_cast<int>(values.cols()); }
  Mat2 matrix_at(int n) const;  // for 4-component fields
};

struct VelocitySample {
  Vec2 v;
  Mat2 grad;  // grad(i,j) = ∂_j v_i
};
using VelocityField = std::function<VelocitySample(const Vec2&)>;

enum class AdvectScheme { SemiLagrangian, Upwind, MethodOfLines };

struct AdvectOptions {
  AdvectScheme scheme = AdvectScheme::SemiLagrangian;
  double cfl_limit = 1.0;  // upwind only
};

// One step of length dt with the velocity frozen over the step.
TransportField advect(const TransportField& field, const VelocityField& velocity, double dt,
                      const AdvectOptions& opt = {});

// Explicit r-Laplacian smoothing z ← z + τ div(|∇z|^{r-2}∇z) with zero-flux
// walls, sub-cycled so that each substep is a convex combination of
// neighbours (hence max-norm non-increasing).
TransportField r_laplacian_smooth(const TransportField& field, double tau, double r);

// advect followed by smoothing with τ = ε dt.
TransportField parabolic_regularized_advect(const TransportField& field, const VelocityField& velocity,
                                            double dt, double eps, double r,
                                            const AdvectOptions& opt = {});

// Right-hand side b(∇v, z) - (v·∇)z at the nodes, for method-of-lines use.
// v and L are the nodal velocity and velocity gradient.
Eigen::MatrixXd transport_rate(const BilinearRHS& b, const GridDerivative& D, const Eigen::MatrixXd& z,
                               const Eigen::MatrixXd& v, const Eigen::MatrixXd& L);

struct ConsistencyReport {
  double rho_det_drift = 0.0;      // max |ρ det F - ρ_R| / ρ_R
  double inverse_det_drift = 0.0;  // max |(1/det F)_transported · det F - 1|
};

ConsistencyReport consistency_monitors(const Eigen::VectorXd& rho, const Eigen::MatrixXd& F,
                                       const Eigen::VectorXd& rho_R,
                                       const Eigen::VectorXd* inverse_det = nullptr);

}  // namespace ekv
