#include "ekv/oracles.hpp"

#include "ekv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ekv::oracles {

FdReport fd_jacobian_check(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                           const Eigen::MatrixXd& J, const Eigen::VectorXd& x,
                           const std::vector<double>& hs, double min_order, double floor) {
  FdReport r;
  const double scale = 1.0 + J.cwiseAbs().maxCoeff() + f(x).cwiseAbs().maxCoeff();
  for (double h : hs) {
    double err = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double hi = h * std::max(1.0, std::abs(x(i)));
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += hi;
      xm(i) -= hi;
      const Eigen::VectorXd d = (f(xp) - f(xm)) / (2.0 * hi);
      err = std::max(err, (d - J.col(i)).cwiseAbs().maxCoeff());
    }
    r.errors.push_back(err);
  }
  r.exact = std::all_of(r.errors.begin(), r.errors.end(), [&](double e) { return e <= floor * scale; });
  if (r.exact) {
    r.passed = true;
    return r;
  }
  // fit only where truncation dominates round-off
  std::vector<double> hx, ex;
  for (size_t i = 0; i < hs.size(); ++i)
    if (r.errors[i] > floor * scale * 1e-3) {
      hx.push_back(hs[i]);
      ex.push_back(r.errors[i]);
    }
  r.observed_order = hx.size() >= 2 ? loglog_slope(hx, ex) : 0.0;
  r.passed = r.observed_order >= min_order;
  return r;
}

FdReport fd_gradient_check(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& grad,
                           const Eigen::VectorXd& x, const std::vector<double>& hs, double min_order,
                           double floor) {
  auto fv = [&](const Eigen::VectorXd& y) { return Eigen::VectorXd::Constant(1, f(y)); };
  return fd_jacobian_check(fv, grad.transpose(), x, hs, min_order, floor);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OrderReport richardson_order(const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& step,
                             const Eigen::VectorXd& y0, double T, const std::vector<double>& dts) {
  if (dts.size() < 3) throw Error(ErrorKind::UsageError, "richardson_order needs at least three step sizes");
  std::vector<Eigen::VectorXd> sol;
  for (double dt : dts) {
    const int n = static_cast<int>(std::lround(T / dt));
    Eigen::VectorXd y = y0;
    for (int i = 0; i < n; ++i) y = step(y, T / n);
    sol.push_back(y);
  }
  OrderReport r;
  const double ref = std::max(1.0, sol.back().cwiseAbs().maxCoeff());
  for (size_t i = 0; i + 1 < sol.size(); ++i) {
    r.dts.push_back(dts[i]);
    r.errors.push_back((sol[i] - sol[i + 1]).cwiseAbs().maxCoeff());
  }
  for (double e : r.errors)
    if (!(e > 1e-13 * ref))
      throw Error(ErrorKind::InsufficientDecay, "richardson_order: successive differences at round-off");
  r.order = loglog_slope(r.dts, r.errors);
  return r;
}

Eigen::VectorXd integrate_dp45(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                               Eigen::VectorXd y, double t0, double t1, double rtol, double atol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                      e6 = 22.0 / 525, e7 = -1.0 / 40;
  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0, h = dir * std::min(std::abs(span), 1e-3 * std::max(1.0, std::abs(span)));
  Eigen::VectorXd k1 = f(t, y);
  for (int it = 0; it < 10000000; ++it) {
    if (dir * (t + h - t1) > 0) h = t1 - t;
    const Eigen::VectorXd k2 = f(t + c2 * h, y + h * a21 * k1);
    const Eigen::VectorXd k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::VectorXd yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = f(t + h, yn);
    const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(yn(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    if (en <= 1.0) {
      t += h;
      y = yn;
      k1 = k7;
      if (dir * (t - t1) >= 0) return y;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= fac;
  }
  throw Error(ErrorKind::Timeout, "integrate_dp45: step budget exhausted");
}

Eigen::VectorXd characteristic_solution(const std::function<Eigen::MatrixXd(const Mat2&)>& B,
                                        const OracleVelocity& v,
                                        const std::function<Eigen::VectorXd(const Vec2&)>& z0, const Vec2& x,
                                        double t, double tol) {
  auto back = [&](double, const Eigen::VectorXd& p) -> Eigen::VectorXd { return -v(Vec2(p(0), p(1))).first; };
  const Eigen::VectorXd X0 = integrate_dp45(back, Eigen::VectorXd(x), 0.0, t, tol, tol);
  const Eigen::VectorXd zi = z0(Vec2(X0(0), X0(1)));
  const int m = static_cast<int>(zi.size());
  Eigen::VectorXd y(2 + m);
  y << X0, zi;
  auto fwd = [&](double, const Eigen::VectorXd& s) -> Eigen::VectorXd {
    const auto [vel, L] = v(Vec2(s(0), s(1)));
    Eigen::VectorXd d(2 + m);
    d.head<2>() = vel;
    d.tail(m) = B(L) * s.tail(m);
    return d;
  };
  return integrate_dp45(fwd, y, 0.0, t, tol, tol).tail(m);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  // Golub–Welsch
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    T(i, i - 1) = T(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

double reference_integral(const std::function<double(const Vec2&)>& f, double Lx, double Ly, int cells, int order) {
  const auto [x, w] = gauss_legendre(order);
  const double hx = Lx / cells, hy = Ly / cells;
  double s = 0.0;
  for (int cj = 0; cj < cells; ++cj)
    for (int ci = 0; ci < cells; ++ci)
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
          const Vec2 p((ci + 0.5 * (x(a) + 1.0)) * hx, (cj + 0.5 * (x(b) + 1.0)) * hy);
          s += 0.25 * w(a) * w(b) * hx * hy * f(p);
        }
  return s;
}

double permutation_det(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  double s = 0.0;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
    double prod = (inv % 2) ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) prod *= A(i, p[i]);
    s += prod;
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

Mat2 ode_exponential(const Mat2& L, double t) {
  auto f = [&](double, const Eigen::VectorXd& y) -> Eigen::VectorXd {
    Eigen::Map<const Mat2> P(y.data());
    Mat2 d = L * P;
    return Eigen::Map<const Eigen::VectorXd>(d.data(), 4);
  };
  Eigen::VectorXd y(4);
  y << 1, 0, 0, 1;
  y = integrate_dp45(f, y, 0.0, t, 1e-13, 1e-14);
  return Eigen::Map<const Mat2>(y.data());
}

}  // namespace ekv::oracles
