#pragma once

#include "dtnlab/semigroup.hpp"

#include <Eigen/Core>

namespace dtn {

/// Trapezoid rule in y = ln s on [s_min, s_max]; the range is chosen from
/// explicit tail bounds, and the error estimate compares the rule with its
/// own midpoint refinement.
struct SubordinationQuadrature {
  int nodes = 200;
  double tolerance = 1e-8;
};

struct SubordinationResult {
  Complex value;
  double error_estimate = 0.0;
  double tail_estimate = 0.0;
  int evaluations = 0;
};

/// μ_z(s) = z s^{−3/2} e^{−z²/4s} / √(4π).
Complex subordination_density(Complex z, double s);

/// ∫₀^∞ μ_z(s) e^{−s a²} ds, which equals e^{−z a} for a ≥ 0 and Re z > 0.
/// For complex z = r e^{iθ} the integration path is rotated (s ↦ s e^{iθ}) so the
/// integrand decays at both ends for every |θ| < π/2. Throws std::runtime_error
/// with the estimate if it exceeds the tolerance.
SubordinationResult subordinated_exponential(const ComplexTime& z, double a, const SubordinationQuadrature& q = {});

struct SubordinatedVector {
  Eigen::VectorXcd value;
  double error_estimate = 0.0;
};

/// ∫₀^∞ μ_z(s) e^{−sA} φ ds with A = (𝒩_V + I)^{2m}, i.e. e^{−z P^m} φ for P = 𝒩_V + I.
/// The error estimate bounds the sup-norm error of the result.
SubordinatedVector subordinate(const DtnOperator& op, int m, const ComplexTime& z, const Eigen::VectorXcd& phi,
                               const SubordinationQuadrature& q = {});

/// c_β = ∫₀^∞ (4π)^{−1/2} s^{−3/2} e^{−1/4s} s^β ds by quadrature, β < 1/2.
double subordination_moment(double beta, int nodes = 400);

}  // namespace dtn
