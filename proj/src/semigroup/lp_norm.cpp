#include "dtnlab/lp_norm.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <stdexcept>

namespace dtn {

using Complex = std::complex<double>;

namespace {

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

// Unweighted duality map: d with ‖d‖_{q'} = 1 and Σ d_i y_i = ‖y‖_q.
Eigen::VectorXcd dual_vector(const Eigen::VectorXcd& y, double q) {
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(y.size());
  if (q == kInf) {
    Eigen::Index i = 0;
    y.cwiseAbs().maxCoeff(&i);
    d[i] = std::abs(y[i]) > 0 ? std::conj(y[i]) / std::abs(y[i]) : Complex(1.0);
    return d;
  }
  const double norm = std::pow(y.cwiseAbs().array().pow(q).sum(), 1.0 / q);
  if (norm == 0.0) return d;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double m = std::abs(y[i]);
    if (m > 0.0) d[i] = std::pow(m / norm, q - 1.0) * std::conj(y[i]) / m;
  }
  return d;
}

double plain_norm(const Eigen::VectorXcd& x, double p) {
  if (p == kInf) return x.cwiseAbs().maxCoeff();
  return std::pow(x.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

}  // namespace

OperatorNormResult operator_norm(const Eigen::MatrixXcd& K, const Eigen::VectorXd& w, double p, double q,
                                 const PowerIterationOptions& options) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::domain_error("operator_norm: exponents must be in [1, ∞]");
  if (K.rows() != w.size() || K.cols() != w.size()) throw std::invalid_argument("operator_norm: size mismatch");
  OperatorNormResult out;
  out.exact = true;
  if (p == 1.0) {
    // Extreme points of the L₁ ball are δ_b / w_b, mapped to column b of K.
    for (Eigen::Index b = 0; b < K.cols(); ++b) out.value = std::max(out.value, lp_norm(K.col(b), w, q));
    return out;
  }
  if (q == kInf) {
    const double pp = conjugate_exponent(p);
    for (Eigen::Index a = 0; a < K.rows(); ++a) {
      const Eigen::VectorXcd row = K.row(a).transpose();
      out.value = std::max(out.value, lp_norm(row, w, pp));
    }
    return out;
  }
  const Eigen::VectorXd ws = w.cwiseSqrt();
  if (p == 2.0 && q == 2.0) {
    const Eigen::MatrixXcd M = ws.cast<Complex>().asDiagonal() * K * ws.cast<Complex>().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    out.value = svd.singularValues()[0];
    return out;
  }

  // Unweighted form: x = W^{1/p} φ, M = W^{1/q} K W^{1 − 1/p}.
  out.exact = false;
  Eigen::VectorXd left(w.size()), right(w.size());
  for (Eigen::Index a = 0; a < w.size(); ++a) {
    left[a] = q == kInf ? 1.0 : std::pow(w[a], 1.0 / q);
    right[a] = std::pow(w[a], 1.0 - 1.0 / p);
  }
  const Eigen::MatrixXcd M = left.cast<Complex>().asDiagonal() * K * right.cast<Complex>().asDiagonal();
  const double pp = conjugate_exponent(p);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < options.starts; ++s) {
    Eigen::VectorXcd x(M.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = s == 0 ? 1.0 : unit(rng);
    x /= plain_norm(x, p);
    double value = 0.0;
    for (int it = 0; it < options.iterations; ++it) {
      const Eigen::VectorXcd y = M * x;
      const double v = plain_norm(y, q);
      const Eigen::VectorXcd g = M.transpose() * dual_vector(y, q);
      Eigen::VectorXcd next = dual_vector(g, pp);
      const double nn = plain_norm(next, p);
      if (nn == 0.0) break;
      next /= nn;
      x = next;
      if (std::abs(v - value) <= options.tolerance * std::max(1.0, v)) {
        value = v;
        break;
      }
      value = v;
    }
    out.value = std::max(out.value, plain_norm(M * x, q));
  }
  return out;
}

}  // namespace dtn
