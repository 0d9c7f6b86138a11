#pragma once

#include "dtnlab/dtn.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <optional>
#include <string>

namespace dtn {

using Complex = std::complex<double>;

/// Point of the closed right half-plane. Construction rejects Re z < 0 and the
/// imaginary axis except z = 0, which only apply_semigroup accepts.
class ComplexTime {
 public:
  ComplexTime(Complex z);  // NOLINT(google-explicit-constructor): times read naturally as literals
  ComplexTime(double t) : ComplexTime(Complex(t, 0.0)) {}  // NOLINT
  static ComplexTime polar(double modulus, double theta);

  [[nodiscard]] Complex value() const { return z_; }
  [[nodiscard]] double modulus() const { return std::abs(z_); }
  [[nodiscard]] double arg() const { return std::arg(z_); }
  [[nodiscard]] double real() const { return z_.real(); }
  [[nodiscard]] bool is_zero() const { return z_ == Complex(0.0, 0.0); }
  [[nodiscard]] bool is_real() const { return z_.imag() == 0.0; }
  [[nodiscard]] ComplexTime conj() const { return ComplexTime(std::conj(z_)); }

 private:
  Complex z_;
};

/// Coefficients ⟨φ, φ_k⟩ in the boundary pairing, then Σ f(λ_k) c_k φ_k.
template <typename Derived, typename F>
Eigen::VectorXcd spectral_apply(const DtnOperator& op, const Eigen::MatrixBase<Derived>& phi, F&& f) {
  const Eigen::VectorXcd c =
      op.eigenvectors.transpose().cast<Complex>() * (op.weights().cast<Complex>().asDiagonal() * phi.template cast<Complex>());
  Eigen::VectorXcd scaled(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) scaled[k] = f(op.eigenvalues[k]) * c[k];
  return op.eigenvectors.cast<Complex>() * scaled;
}

/// S_z φ = e^{−z𝒩_V} φ.
Eigen::VectorXcd apply_semigroup(const DtnOperator& op, const ComplexTime& z, const Eigen::VectorXcd& phi);

/// T^(m)_z φ = e^{−z(𝒩_V + I)^m} φ, m ≥ 1.
Eigen::VectorXcd power_semigroup(const DtnOperator& op, int m, const ComplexTime& z, const Eigen::VectorXcd& phi);

struct MultiplierSpec {
  std::function<Complex(double)> f;
  /// Used for eigenvalues within `zero_tolerance` of 0 (power-type f such as λ^{is}).
  std::optional<Complex> value_at_zero;
  double zero_tolerance = 1e-10;
  std::string name = "f";
};

/// f(𝒩_V) φ. Throws std::domain_error naming λ_k if f(λ_k) is not finite.
Eigen::VectorXcd spectral_multiplier(const DtnOperator& op, const MultiplierSpec& f, const Eigen::VectorXcd& phi);

/// Largest |f(λ_k)|, the L₂ operator norm of f(𝒩_V).
double multiplier_sup(const DtnOperator& op, const MultiplierSpec& f);

/// Kernel of S_z with respect to the boundary pairing: (S_z φ)(x_a) = Σ_b w_b K(a, b) φ_b.
/// Optional tangential derivatives ∂_s^k in the first and ∂_s^ℓ in the second
/// variable (arc length, counterclockwise).
struct KernelMatrix {
  Eigen::MatrixXcd values;
  ComplexTime z{1.0};
  Provenance provenance = Provenance::fem_schur;
  int order_x = 0;
  int order_y = 0;
  /// Fourier modes summed (exact backend) or eigenpairs used (FEM).
  std::size_t modes = 0;

  [[nodiscard]] Eigen::Index size() const { return values.rows(); }
  [[nodiscard]] Eigen::MatrixXd real() const { return values.real(); }
};

enum class KernelEvaluation {
  /// Fourier series for exact operators, eigenpairs otherwise.
  automatic,
  /// Always the stored eigenpairs: the kernel of the discrete operator that
  /// quadrature-based norms and row sums act on.
  eigenpairs,
};

struct KernelOptions {
  KernelEvaluation evaluation = KernelEvaluation::automatic;
  int order_x = 0;
  int order_y = 0;
  /// Overrides the operator's mode_factor when positive.
  double mode_factor = 0.0;
};

/// Mode count used by the exact backend: e^{−Re z·m/R_max} m^{k+ℓ} falls below
/// about 1e-14 past it.
std::size_t exact_mode_count(const DtnOperator& op, const ComplexTime& z, int derivative_order, double mode_factor);

/// Exact operators sum the Fourier series per mode, folded onto the node
/// circle, so the number of modes is not limited by the node count. FEM
/// operators (and KernelEvaluation::eigenpairs) use the eigendecomposition and,
/// for derivatives, fourth-order periodic differences along each component.
KernelMatrix kernel_matrix(const DtnOperator& op, const ComplexTime& z, const KernelOptions& options = {});

/// Kernel of an arbitrary spectral function f(𝒩_V) from the stored eigenpairs.
Eigen::MatrixXcd spectral_kernel(const DtnOperator& op, const std::function<Complex(double)>& f);

}  // namespace dtn
