#pragma once
// Independent reference computations. Nothing here calls into the library's
// numerics: each oracle is a different method for the same quantity.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, int depth = 40) {
  const auto rule = [&](double l, double r, double fl, double fm, double fr) { return (r - l) / 6.0 * (fl + 4 * fm + fr); };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double eps, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = rule(l, m, fl, flm, fm), right = rule(m, r, fm, frm, fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, eps / 2, d - 1) + rec(m, r, fm, frm, fr, right, eps / 2, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), tol, depth);
}

/// Length of the curve r(θ) e^{iθ}, θ ∈ [0, 2π).
inline double polar_arc_length(const std::function<double(double)>& r, const std::function<double(double)>& dr) {
  // Split into pieces so the adaptive rule sees each bump.
  double total = 0.0;
  const int pieces = 16;
  for (int i = 0; i < pieces; ++i) {
    const double a = 2 * std::numbers::pi * i / pieces, b = 2 * std::numbers::pi * (i + 1) / pieces;
    total += simpson([&](double t) { return std::hypot(r(t), dr(t)); }, a, b);
  }
  return total;
}

/// u'' + u'/r − (m²/r² + c) u = 0 on (0, R], regular at 0, by RK4.
/// Returns u'(R)/u(R), the DtN eigenvalue of mode m on the disk of radius R.
inline double radial_shooting_disk(int m, double c, double R = 1.0, int steps = 20000) {
  // Series start u = r^m (1 + c r² / (4(m+1))), with r0^m scaled out.
  const double r0 = 1e-4 * R;
  const double a = c / (4.0 * (m + 1));
  double u = 1 + a * r0 * r0;
  double du = m / r0 + (m + 2) * a * r0;
  const auto rhs = [&](double r, double y0, double y1, double& d0, double& d1) {
    d0 = y1;
    d1 = -y1 / r + (m * m / (r * r) + c) * y0;
  };
  const double h = (R - r0) / steps;
  double r = r0;
  for (int i = 0; i < steps; ++i) {
    double k0, l0, k1, l1, k2, l2, k3, l3;
    rhs(r, u, du, k0, l0);
    rhs(r + h / 2, u + h / 2 * k0, du + h / 2 * l0, k1, l1);
    rhs(r + h / 2, u + h / 2 * k1, du + h / 2 * l1, k2, l2);
    rhs(r + h, u + h * k2, du + h * l2, k3, l3);
    u += h / 6 * (k0 + 2 * k1 + 2 * k2 + k3);
    du += h / 6 * (l0 + 2 * l1 + 2 * l2 + l3);
    r += h;
  }
  return du / u;
}

/// Solution of the same ODE on [r0, r1] from initial data (u, u').
inline void radial_integrate(int m, double c, double r0, double r1, double& u, double& du, int steps = 20000) {
  const double h = (r1 - r0) / steps;
  double r = r0;
  const auto rhs = [&](double rr, double y0, double y1, double& d0, double& d1) {
    d0 = y1;
    d1 = -y1 / rr + (m * m / (rr * rr) + c) * y0;
  };
  for (int i = 0; i < steps; ++i) {
    double k0, l0, k1, l1, k2, l2, k3, l3;
    rhs(r, u, du, k0, l0);
    rhs(r + h / 2, u + h / 2 * k0, du + h / 2 * l0, k1, l1);
    rhs(r + h / 2, u + h / 2 * k1, du + h / 2 * l1, k2, l2);
    rhs(r + h, u + h * k2, du + h * l2, k3, l3);
    u += h / 6 * (k0 + 2 * k1 + 2 * k2 + k3);
    du += h / 6 * (l0 + 2 * l1 + 2 * l2 + l3);
    r += h;
  }
}

/// Mode-m DtN block on the annulus a < r < b (outward normals) from two shots:
/// the 2×2 map (u(a), u(b)) ↦ (−u'(a), u'(b)), symmetrized in L² of arc length.
/// Returns its eigenvalues ascending.
inline std::pair<double, double> annulus_mode_eigenvalues(int m, double c, double a, double b) {
  // Basis solutions with (u, u') = (1, 0) and (0, 1) at r = a.
  double u1 = 1, d1 = 0, u2 = 0, d2 = 1;
  radial_integrate(m, c, a, b, u1, d1);
  radial_integrate(m, c, a, b, u2, d2);
  // u = α u1 + β u2, so u(a) = α and u(b) = α u1 + β u2.
  Eigen::Matrix2d N;
  // Data (1, 0): α = 1, β = −u1/u2. Data (0, 1): α = 0, β = 1/u2.
  // Outputs: −u'(a) = −β and u'(b) = α d1 + β d2.
  N(0, 0) = u1 / u2;
  N(1, 0) = d1 - u1 / u2 * d2;
  N(0, 1) = -1.0 / u2;
  N(1, 1) = d2 / u2;
  // Similarity with diag(√a, √b) makes it symmetric.
  Eigen::Matrix2d S = Eigen::Vector2d(std::sqrt(a), std::sqrt(b)).asDiagonal() * N *
                      Eigen::Vector2d(1 / std::sqrt(a), 1 / std::sqrt(b)).asDiagonal();
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
  return {es.eigenvalues()[0], es.eigenvalues()[1]};
}

/// Poisson kernel of the unit disk against arc length at r = e^{−t}.
inline double disk_poisson_kernel(double t, double dtheta) {
  const double r = std::exp(-t);
  return (1 - r * r) / (2 * std::numbers::pi * (1 - 2 * r * std::cos(dtheta) + r * r));
}

/// ∂_θ of the same kernel in the first variable.
inline double disk_poisson_kernel_dtheta(double t, double dtheta) {
  const double r = std::exp(-t);
  const double den = 1 - 2 * r * std::cos(dtheta) + r * r;
  return -(1 - r * r) * 2 * r * std::sin(dtheta) / (2 * std::numbers::pi * den * den);
}

/// e^{M} by scaling and squaring with a Taylor series, complex dense.
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& M) {
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm + 1e-300))) + 1);
  const Eigen::MatrixXcd A = M / std::pow(2.0, s);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(M.rows(), M.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * A / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// c_β = ∫ μ_1(s) s^β ds for the one-sided stable density of index 1/2.
inline double subordinator_moment(double beta) {
  return std::pow(4.0, -beta) * std::tgamma(0.5 - beta) / std::sqrt(std::numbers::pi);
}

}  // namespace oracle
