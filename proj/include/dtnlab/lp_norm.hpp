#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <limits>

namespace dtn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (Σ_a w_a |φ_a|^p)^{1/p}; p = ∞ gives max |φ_a|.
template <typename Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& phi, const Eigen::VectorXd& w, double p) {
  if (p == kInf) return phi.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index a = 0; a < phi.size(); ++a) s += w[a] * std::pow(std::abs(phi[a]), p);
  return std::pow(s, 1.0 / p);
}

struct OperatorNormResult {
  double value = 0.0;
  /// True when the value is exact (p = 1, q = ∞ or p = q = 2); otherwise a
  /// lower bound from the best start of the power iteration.
  bool exact = false;
};

struct PowerIterationOptions {
  int starts = 8;
  int iterations = 200;
  double tolerance = 1e-12;
  std::uint64_t seed = 1;
};

/// ‖S‖_{p→q} for the operator (Sφ)_a = Σ_b w_b K_ab φ_b with weighted discrete
/// norms, 1 ≤ p, q ≤ ∞. Exact for p = 1 (column norms), q = ∞ (dual row
/// norms) and p = q = 2 (singular value); Boyd's power method otherwise.
OperatorNormResult operator_norm(const Eigen::MatrixXcd& K, const Eigen::VectorXd& w, double p, double q,
                                 const PowerIterationOptions& options = {});

}  // namespace dtn
