#pragma once

#include "dtnlab/boundary.hpp"
#include "dtnlab/semigroup.hpp"

#include <Eigen/Core>

#include <cmath>

namespace dtn {

/// δ_g^d(E) = [M_g, ·]^d applied to E: entries (g_a − g_b)^d E_ab.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> commutator(
    const Eigen::MatrixBase<Derived>& E, const Eigen::VectorXd& g, int d = 1) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(E.rows(), E.cols());
  for (Eigen::Index b = 0; b < E.cols(); ++b)
    for (Eigen::Index a = 0; a < E.rows(); ++a) out(a, b) = Scalar(std::pow(g[a] - g[b], d)) * E(a, b);
  return out;
}

template <typename Derived>
auto commutator(const Eigen::MatrixBase<Derived>& E, const LipschitzWitness& g, int d = 1) {
  return commutator(E, g.values, d);
}

/// [B, E] = BE − EB for general B.
template <typename DB, typename DE>
auto bracket(const Eigen::MatrixBase<DB>& B, const Eigen::MatrixBase<DE>& E) {
  return (B * E - E * B).eval();
}

struct DuhamelResult {
  double residual = 0.0;     // ‖direct − expansion‖₂
  double direct_norm = 0.0;  // ‖δ^n(e^{−zA})‖₂
  Eigen::MatrixXcd direct;
  Eigen::MatrixXcd expansion;
};

/// Compares δ^n(e^{−zA}), δ = [B, ·], computed from the matrix exponential,
/// with the simplex expansion
///   Σ_k (−z)^k Σ_{j₁+…+j_k = n} n!/(j₁!⋯j_k!) ∫_{Δ_k} T_{t₁z} δ^{j₁}(A) T_{t₂z} ⋯ δ^{j_k}(A) T_{t_{k+1}z} dt,
/// where T_w = e^{−wA}, t_{k+1} = 1 − t₁ − … − t_k and dt is Lebesgue measure on
/// the simplex. A must be symmetric. The expansion uses a collapsed
/// Gauss–Legendre product rule with `nodes` points per axis.
DuhamelResult duhamel_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const ComplexTime& z, int n,
                               int nodes = 64);

}  // namespace dtn
