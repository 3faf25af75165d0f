#pragma once

#include "ekv/tensors.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

// Independent reference computations used to certify the production code.
// Only the tensors module is used here.
namespace ekv::oracles {

struct FdReport {
  bool passed = false;
  bool exact = false;  // the difference quotient matched to round-off at every h
  double observed_order = 0.0;
  std::vector<double> errors;  // max-norm error per h
};

// Central differences of f against the analytic Jacobian J at x over a
// schedule of step sizes.  Passes when the observed order is >= min_order,
// or when every error sits below `floor` (relative to the data scale).
FdReport fd_jacobian_check(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           const Eigen::MatrixXd& J, const Eigen::VectorXd& x,
                           const std::vector<double>& h_schedule = {1e-2, 5e-3, 2.5e-3, 1.25e-3},
                           double min_order = 1.9, double floor = 1e-9);

FdReport fd_gradient_check(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& grad, const Eigen::VectorXd& x,
                           const std::vector<double>& h_schedule = {1e-2, 5e-3, 2.5e-3, 1.25e-3},
                           double min_order = 1.9, double floor = 1e-9);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct OrderReport {
  double order = 0.0;
  std::vector<double> dts;
  std::vector<double> errors;  // ‖y(dt_i) - y(dt_{i+1})‖
};

// Observed temporal order from successive differences of solutions at T
// computed with each dt in the (decreasing) schedule.  Throws
// InsufficientDecay when the differences reach round-off.
OrderReport richardson_order(const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& step,
                             const Eigen::VectorXd& y0, double T, const std::vector<double>& dt_schedule);

// Dormand–Prince 5(4) with standard step control.
Eigen::VectorXd integrate_dp45(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                               Eigen::VectorXd y, double t0, double t1, double rtol = 1e-12,
                               double atol = 1e-12);

using OracleVelocity = std::function<std::pair<Vec2, Mat2>(const Vec2&)>;

// z(x, t) for ż = B(∇v) z along characteristics of a steady velocity field:
// trace back to the foot X₀, then integrate (x, z) forward from z0(X₀).
Eigen::VectorXd characteristic_solution(const std::function<Eigen::MatrixXd(const Mat2&)>& B,
                                        const OracleVelocity& v,
                                        const std::function<Eigen::VectorXd(const Vec2&)>& z0,
                                        const Vec2& x, double t, double tol = 1e-12);

// Gauss–Legendre nodes and weights on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

// Composite Gauss–Legendre rule on [0,Lx]×[0,Ly].
double reference_integral(const std::function<double(const Vec2&)>& f, double Lx, double Ly, int cells,
                          int order);

// Leibniz permutation expansion.
double permutation_det(const Eigen::MatrixXd& A);

// Φ(t) solving Φ' = LΦ, Φ(0) = I, by adaptive integration.
Mat2 ode_exponential(const Mat2& L, double t);

}  // namespace ekv::oracles
