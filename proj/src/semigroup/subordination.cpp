#include "dtnlab/subordination.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dtn {

namespace {

const double kInvSqrt4Pi = 1.0 / std::sqrt(4.0 * std::numbers::pi);

struct Path {
  double r;
  double theta;
  Complex rotation;  // e^{iθ}
  Complex w;         // r e^{iθ/2}
  double y_min;
  double y_max;
  double tail;
};

// Rotated representation: with w = r e^{iθ/2} and A ↦ e^{iθ} A,
// e^{−z a} = ∫ μ_w(s) e^{−s e^{iθ} a²} ds.
Path make_path(const ComplexTime& z, double a2_min, double tolerance) {
  Path p{};
  p.r = z.modulus();
  p.theta = z.arg();
  p.rotation = std::polar(1.0, p.theta);
  p.w = std::polar(p.r, p.theta / 2.0);
  const double ct = std::cos(p.theta);
  const double budget = 1e-3 * tolerance;

  double X = 1.0;  // X = r² cosθ / (4 s_min); lower tail ≤ erfc(√X)/√cosθ
  while (std::erfc(std::sqrt(X)) / std::sqrt(ct) > budget) X *= 1.25;
  const double s_min = p.r * p.r * ct / (4.0 * X);
  const double lower = std::erfc(std::sqrt(X)) / std::sqrt(ct);

  auto upper_tail = [&](double S) {
    const double plain = p.r / std::sqrt(std::numbers::pi * S);
    if (a2_min <= 0.0) return plain;
    const double decay = p.r * kInvSqrt4Pi * std::pow(S, -1.5) * std::exp(-S * a2_min * ct) / (a2_min * ct);
    return std::min(plain, decay);
  };
  double S = std::max(4.0 * s_min, 1.0);
  while (upper_tail(S) > budget && S < 1e300) S *= 2.0;
  p.y_min = std::log(s_min);
  p.y_max = std::log(S);
  p.tail = lower + upper_tail(S);
  return p;
}

// Integrand in y = ln s, including the Jacobian s.
Complex integrand(const Path& p, double y, double a2) {
  const double s = std::exp(y);
  return subordination_density(p.w, s) * s * std::exp(-s * p.rotation * a2);
}

}  // namespace

Complex subordination_density(Complex z, double s) {
  return z * kInvSqrt4Pi * std::pow(s, -1.5) * std::exp(-z * z / (4.0 * s));
}

SubordinationResult subordinated_exponential(const ComplexTime& z, double a, const SubordinationQuadrature& q) {
  if (!(z.real() > 0.0)) throw std::domain_error("subordinated_exponential: need Re z > 0");
  if (!(a >= 0.0)) throw std::domain_error("subordinated_exponential: need a >= 0");
  if (q.nodes < 8) throw std::invalid_argument("subordinated_exponential: at least 8 nodes");
  const double a2 = a * a;
  const Path p = make_path(z, a2, q.tolerance);
  const int Q = q.nodes;
  const double h = (p.y_max - p.y_min) / (Q - 1);
  Complex coarse = 0.0;
  Complex mid = 0.0;
  for (int j = 0; j < Q; ++j) {
    const double wt = (j == 0 || j == Q - 1) ? 0.5 : 1.0;
    coarse += wt * integrand(p, p.y_min + j * h, a2);
    if (j + 1 < Q) mid += integrand(p, p.y_min + (j + 0.5) * h, a2);
  }
  coarse *= h;
  const Complex fine = 0.5 * (coarse + mid * h);

  SubordinationResult out;
  out.value = fine;
  out.tail_estimate = p.tail;
  out.error_estimate = std::abs(fine - coarse) + p.tail;
  out.evaluations = 2 * Q - 1;
  if (!(out.error_estimate <= q.tolerance)) {
    std::ostringstream os;
    os << "subordinated_exponential: quadrature did not converge for z = " << z.value() << ", a = " << a
       << " (estimate " << out.error_estimate << ", tails " << p.tail << ", tolerance " << q.tolerance << ")";
    throw std::runtime_error(os.str());
  }
  return out;
}

SubordinatedVector subordinate(const DtnOperator& op, int m, const ComplexTime& z, const Eigen::VectorXcd& phi,
                               const SubordinationQuadrature& q) {
  if (m < 1) throw std::domain_error("subordinate: power m must be >= 1");
  if (!(z.real() > 0.0)) throw std::domain_error("subordinate: need Re z > 0");
  const Eigen::VectorXcd c =
      op.eigenvectors.transpose().cast<Complex>() * (op.weights().cast<Complex>().asDiagonal() * phi);
  Eigen::VectorXcd scaled(c.size());
  double err = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    // a is the eigenvalue of √A = P^m, so A = a².
    const double a = std::pow(op.eigenvalues[k] + 1.0, m);
    const SubordinationResult r = subordinated_exponential(z, a, q);
    scaled[k] = r.value * c[k];
    err += r.error_estimate * std::abs(c[k]) * op.eigenvectors.col(k).cwiseAbs().maxCoeff();
  }
  SubordinatedVector out;
  out.value = op.eigenvectors.cast<Complex>() * scaled;
  out.error_estimate = err;
  return out;
}

double subordination_moment(double beta, int nodes) {
  if (!(beta < 0.5)) throw std::domain_error("subordination_moment: β must be < 1/2");
  // In y = ln s the integrand is s^{β−1/2} e^{−1/4s}/√(4π). Past y_max the
  // factor e^{−1/4s} is 1 to double precision and the tail is integrated exactly.
  const double decay = 0.5 - beta;
  const double y_min = std::log(1.0 / (4.0 * 60.0));
  const double y_max = std::min(700.0, std::max(40.0, 40.0 / decay));
  const int count = std::max(nodes, static_cast<int>(std::ceil((y_max - y_min) / 0.1)) + 1);
  const double h = (y_max - y_min) / (count - 1);
  double sum = 0.0;
  for (int j = 0; j < count; ++j) {
    const double s = std::exp(y_min + j * h);
    const double wt = (j == 0 || j == count - 1) ? 0.5 : 1.0;
    sum += wt * kInvSqrt4Pi * std::pow(s, -decay) * std::exp(-1.0 / (4.0 * s));
  }
  return sum * h + kInvSqrt4Pi * std::exp(-decay * y_max) / decay;
}

}  // namespace dtn
