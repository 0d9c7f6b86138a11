#include "dtnlab/rotational.hpp"

#include "dtnlab/bessel.hpp"
#include "dtnlab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace dtn {

RotationalSpectrum::RotationalSpectrum(std::vector<double> radii, double potential)
    : radii_(std::move(radii)), potential_(potential) {
  if (radii_.empty() || radii_.size() > 2)
    throw std::invalid_argument("RotationalSpectrum: one (disk) or two (annulus) radii expected");
  if (radii_.size() == 2 && !(0.0 < radii_[0] && radii_[0] < radii_[1]))
    throw std::invalid_argument("RotationalSpectrum: annulus radii must satisfy 0 < r_inner < r_outer");
  if (!(potential_ >= 0.0) || !std::isfinite(potential_))
    throw std::invalid_argument("RotationalSpectrum: constant potential must be finite and >= 0");
}

Eigen::MatrixXd RotationalSpectrum::block_matrix(std::size_t m) const { return block_matrices(m + 1)[m]; }

std::vector<Eigen::MatrixXd> RotationalSpectrum::block_matrices(std::size_t count) const {
  std::vector<Eigen::MatrixXd> out(count);
  const double c = potential_;
  if (radii_.size() == 1) {
    const double R = radii_[0];
    std::vector<double> ri;
    if (c > 0.0) ri = bessel_i_ratios(count, std::sqrt(c) * R);
    for (std::size_t m = 0; m < count; ++m) {
      const double md = static_cast<double>(m);
      const double v = c > 0.0 ? (md / R + std::sqrt(c) * ri[m]) : md / R;
      out[m] = Eigen::MatrixXd::Constant(1, 1, v);
    }
    return out;
  }

  const double a = radii_[0];
  const double b = radii_[1];
  const double sab = std::sqrt(a * b);
  if (c == 0.0) {
    const double L = std::log(b / a);
    for (std::size_t m = 0; m < count; ++m) {
      Eigen::MatrixXd N(2, 2);
      if (m == 0) {
        N << 1.0 / (a * L), -1.0 / (sab * L), -1.0 / (sab * L), 1.0 / (b * L);
      } else {
        const double md = static_cast<double>(m);
        const double q = std::pow(a / b, md);
        const double s = md / (1.0 - q * q);
        N << s * (1.0 + q * q) / a, -2.0 * s * q / sab, -2.0 * s * q / sab, s * (1.0 + q * q) / b;
      }
      out[m] = N;
    }
    return out;
  }

  const double x = std::sqrt(c);
  const std::vector<double> ia = bessel_i_ratios(count, x * a);
  const std::vector<double> ib = bessel_i_ratios(count, x * b);
  const std::vector<double> ka = bessel_k_ratios(count + 1, x * a);
  const std::vector<double> kb = bessel_k_ratios(count + 1, x * b);
  // ∫_a^b x·I_{m+1}/I_m(xr) dr and ∫_a^b x·K_{m+1}/K_m(xr) dr for every m.
  const QuadratureRule gl = gauss_legendre(24, a, b);
  std::vector<double> int_i(count, 0.0);
  std::vector<double> int_k(count, 0.0);
  for (Eigen::Index q = 0; q < gl.nodes.size(); ++q) {
    const double y = x * gl.nodes[q];
    const std::vector<double> riq = bessel_i_ratios(count, y);
    const std::vector<double> rkq = bessel_k_ratios(count, y);
    for (std::size_t m = 0; m < count; ++m) {
      int_i[m] += gl.weights[q] * x * riq[m];
      int_k[m] += gl.weights[q] * x * rkq[m];
    }
  }
  for (std::size_t m = 0; m < count; ++m) {
    const double md = static_cast<double>(m);
    const double q1 = std::exp(-md * std::log(b / a) - int_i[m]);  // I_m(xa)/I_m(xb)
    const double q2 = std::exp(md * std::log(b / a) - int_k[m]);   // K_m(xb)/K_m(xa)
    const double g1a = md / a + x * ia[m];
    const double g1b = md / b + x * ib[m];
    const double g2a = md / a - x * ka[m];
    const double g2b = md / b - x * kb[m];
    const double det = 1.0 - q1 * q2;
    const double d00 = (q1 * q2 * g1a - g2a) / det;
    const double d01 = q1 * (g2a - g1a) / det;
    const double d10 = q2 * (g2b - g1b) / det;
    const double d11 = (g1b - q1 * q2 * g2b) / det;
    const double off = 0.5 * (std::sqrt(a / b) * d01 + std::sqrt(b / a) * d10);
    Eigen::MatrixXd N(2, 2);
    N << d00, off, off, d11;
    out[m] = N;
  }
  return out;
}

std::vector<ModeBlock> RotationalSpectrum::modes(std::size_t count) const {
  const std::vector<Eigen::MatrixXd> blocks = block_matrices(count);
  std::vector<ModeBlock> out(count);
  for (std::size_t m = 0; m < count; ++m) {
    if (blocks[m].rows() == 1) {
      out[m].values = blocks[m].col(0);
      out[m].vectors = Eigen::MatrixXd::Ones(1, 1);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[m]);
      out[m].values = es.eigenvalues();
      out[m].vectors = es.eigenvectors();
    }
  }
  return out;
}

}  // namespace dtn
