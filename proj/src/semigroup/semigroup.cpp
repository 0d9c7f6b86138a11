#include "dtnlab/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dtn {

ComplexTime::ComplexTime(Complex z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error("ComplexTime: non-finite time");
  if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() != 0.0)) {
    std::ostringstream os;
    os << "ComplexTime: z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
       << "i is outside the open right half-plane";
    throw std::domain_error(os.str());
  }
}

ComplexTime ComplexTime::polar(double modulus, double theta) {
  if (!(modulus >= 0.0)) throw std::domain_error("ComplexTime::polar: modulus must be nonnegative");
  if (!(std::abs(theta) < std::numbers::pi / 2)) throw std::domain_error("ComplexTime::polar: |arg z| must be < π/2");
  return ComplexTime(std::polar(modulus, theta));
}

Eigen::VectorXcd apply_semigroup(const DtnOperator& op, const ComplexTime& z, const Eigen::VectorXcd& phi) {
  if (z.is_zero()) return phi;
  const Complex zz = z.value();
  return spectral_apply(op, phi, [zz](double lambda) { return std::exp(-zz * lambda); });
}

Eigen::VectorXcd power_semigroup(const DtnOperator& op, int m, const ComplexTime& z, const Eigen::VectorXcd& phi) {
  if (m < 1) throw std::domain_error("power_semigroup: power m must be >= 1, got " + std::to_string(m));
  if (z.is_zero()) return phi;
  const Complex zz = z.value();
  return spectral_apply(op, phi, [zz, m](double lambda) { return std::exp(-zz * std::pow(lambda + 1.0, m)); });
}

namespace {

Complex evaluate(const MultiplierSpec& f, double lambda) {
  Complex v = (f.value_at_zero && std::abs(lambda) <= f.zero_tolerance) ? *f.value_at_zero : f.f(lambda);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os << "spectral_multiplier: " << f.name << " is not finite at eigenvalue λ_k = " << lambda;
    if (std::abs(lambda) <= f.zero_tolerance && !f.value_at_zero) os << " (supply value_at_zero)";
    throw std::domain_error(os.str());
  }
  return v;
}

}  // namespace

Eigen::VectorXcd spectral_multiplier(const DtnOperator& op, const MultiplierSpec& f, const Eigen::VectorXcd& phi) {
  if (!f.f) throw std::invalid_argument("spectral_multiplier: empty function");
  return spectral_apply(op, phi, [&f](double lambda) { return evaluate(f, lambda); });
}

double multiplier_sup(const DtnOperator& op, const MultiplierSpec& f) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < op.eigenvalues.size(); ++k) s = std::max(s, std::abs(evaluate(f, op.eigenvalues[k])));
  return s;
}

Eigen::MatrixXcd spectral_kernel(const DtnOperator& op, const std::function<Complex(double)>& f) {
  Eigen::VectorXcd d(op.eigenvalues.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = f(op.eigenvalues[k]);
  const Eigen::MatrixXcd Phi = op.eigenvectors.cast<Complex>();
  return Phi * d.asDiagonal() * Phi.transpose();
}

std::size_t exact_mode_count(const DtnOperator& op, const ComplexTime& z, int derivative_order, double mode_factor) {
  if (!op.rotational) throw std::invalid_argument("exact_mode_count: operator has no rotational structure");
  if (!(z.real() > 0.0)) throw std::domain_error("exact_mode_count: Re z must be > 0");
  const double R = op.rotational->max_radius();
  const double m = std::ceil(R * (32.24 + 12.0 * derivative_order) / z.real() * mode_factor);
  const double floor_modes = static_cast<double>(op.boundary->nodes_per_component / 2);
  const double count = std::max(m, floor_modes) + 1.0;
  if (count > 16.0e6) {
    std::ostringstream os;
    os << "exact_mode_count: Re z = " << z.real() << " needs " << count << " Fourier modes (limit 1.6e7)";
    throw std::domain_error(os.str());
  }
  return static_cast<std::size_t>(count);
}

namespace {

// cos^{(j)}(x) expressed as sign · (cos | sin).
struct TrigDerivative {
  bool use_sin;
  double sign;
};

TrigDerivative cos_derivative(int j) {
  switch (j % 4) {
    case 0: return {false, 1.0};
    case 1: return {true, -1.0};
    case 2: return {false, -1.0};
    default: return {true, 1.0};
  }
}

KernelMatrix rotational_kernel(const DtnOperator& op, const ComplexTime& z, const KernelOptions& o) {
  const BoundarySpace& b = *op.boundary;
  const RotationalSpectrum& rot = *op.rotational;
  const std::size_t n = b.nodes_per_component;
  const std::size_t nc = rot.component_count();
  const int order = o.order_x + o.order_y;
  const double factor = o.mode_factor > 0.0 ? o.mode_factor : op.mode_factor;
  const std::size_t M = exact_mode_count(op, z, order, factor);
  const std::vector<ModeBlock> blocks = rot.modes(M);
  const Complex zz = z.value();

  // fold[i*nc+j][μ] = Σ_{m ≡ μ mod n} m^{k+ℓ} Σ_e e^{−zλ_{m,e}} v_ie v_je / (norm_i norm_j)
  std::vector<Eigen::VectorXcd> fold(nc * nc, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n)));
  const double pi = std::numbers::pi;
  for (std::size_t m = 0; m < M; ++m) {
    const ModeBlock& blk = blocks[m];
    const double md = static_cast<double>(m);
    const double power = order == 0 ? 1.0 : std::pow(md, order);
    if (power == 0.0) continue;
    const Eigen::Index mu = static_cast<Eigen::Index>(m % n);
    for (Eigen::Index e = 0; e < blk.values.size(); ++e) {
      const Complex decay = std::exp(-zz * blk.values[e]) * power;
      for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
          const double norm = (m == 0 ? 2.0 * pi : pi) * std::sqrt(rot.radii()[i] * rot.radii()[j]);
          fold[i * nc + j][mu] += decay * blk.vectors(static_cast<Eigen::Index>(i), e) *
                                  blk.vectors(static_cast<Eigen::Index>(j), e) / norm;
        }
    }
  }

  const TrigDerivative td = cos_derivative(order);
  const double sign = td.sign * ((o.order_y % 2) ? -1.0 : 1.0);
  std::vector<double> table(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double arg = 2.0 * pi * static_cast<double>(r) / static_cast<double>(n);
    table[r] = td.use_sin ? std::sin(arg) : std::cos(arg);
  }

  KernelMatrix K;
  K.z = z;
  K.provenance = op.provenance;
  K.order_x = o.order_x;
  K.order_y = o.order_y;
  K.modes = M;
  K.values.resize(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      const Eigen::VectorXcd& F = fold[i * nc + j];
      const double scale = sign / (std::pow(rot.radii()[i], o.order_x) * std::pow(rot.radii()[j], o.order_y));
      Eigen::VectorXcd profile = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t d = 0; d < n; ++d) {
        Complex s = 0.0;
        for (std::size_t mu = 0; mu < n; ++mu) s += F[static_cast<Eigen::Index>(mu)] * table[(mu * d) % n];
        profile[static_cast<Eigen::Index>(d)] = s * scale;
      }
      const std::size_t bi = b.component_begin[i];
      const std::size_t bj = b.component_begin[j];
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
          K.values(static_cast<Eigen::Index>(bi + a), static_cast<Eigen::Index>(bj + c)) =
              profile[static_cast<Eigen::Index>((a + n - c) % n)];
    }
  return K;
}

// Fourth-order periodic difference in θ divided by the boundary speed, per component.
Eigen::MatrixXd arc_derivative_matrix(const BoundarySpace& b) {
  const Eigen::Index N = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  const std::size_t n = b.nodes_per_component;
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  const double c[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
  for (std::size_t comp = 0; comp < b.component_count(); ++comp) {
    const std::size_t base = b.component_begin[comp];
    for (std::size_t a = 0; a < n; ++a) {
      const Eigen::Index row = static_cast<Eigen::Index>(base + a);
      const double speed = b.domain.boundary_speed(comp, b.angles[row]);
      for (int s = -2; s <= 2; ++s) {
        const std::size_t col = base + (a + n + static_cast<std::size_t>(s + 2) - 2) % n;
        D(row, static_cast<Eigen::Index>(col)) += c[s + 2] / (12.0 * h * speed);
      }
    }
  }
  return D;
}

}  // namespace

KernelMatrix kernel_matrix(const DtnOperator& op, const ComplexTime& z, const KernelOptions& options) {
  if (z.is_zero()) throw std::domain_error("kernel_matrix: S_0 is the identity and has no kernel; need Re z > 0");
  if (options.order_x < 0 || options.order_y < 0 || options.order_x + options.order_y > 2)
    throw std::domain_error("kernel_matrix: derivative orders must satisfy k, ℓ >= 0 and k + ℓ <= 2");
  if (op.rotational && options.evaluation == KernelEvaluation::automatic) return rotational_kernel(op, z, options);

  const Complex zz = z.value();
  KernelMatrix K;
  K.z = z;
  K.provenance = op.provenance;
  K.order_x = options.order_x;
  K.order_y = options.order_y;
  K.modes = op.rank();
  K.values = spectral_kernel(op, [zz](double lambda) { return std::exp(-zz * lambda); });
  if (options.order_x + options.order_y > 0) {
    const Eigen::MatrixXcd D = arc_derivative_matrix(*op.boundary).cast<Complex>();
    for (int i = 0; i < options.order_x; ++i) K.values = D * K.values;
    for (int i = 0; i < options.order_y; ++i) K.values = K.values * D.transpose();
  }
  return K;
}

}  // namespace dtn
