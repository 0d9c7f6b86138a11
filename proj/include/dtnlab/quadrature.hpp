#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace dtn {

/// Nodes and weights of a quadrature rule on a fixed interval.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nodes.size()); }
};

/// n-point Gauss–Legendre rule mapped to [a, b]. Nodes by Newton iteration on P_n.
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Collapsed (Duffy) product rule on the k-simplex {t_i > 0, t_1 + ... + t_k < 1}.
/// Each row of `points` holds (t_1, ..., t_k); weights sum to 1/k!.
struct SimplexRule {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
};

SimplexRule simplex_product_rule(std::size_t dimension, std::size_t nodes_per_axis);

/// Integrates f over [a, b] with the n-point Gauss–Legendre rule.
template <typename F>
auto integrate(F&& f, double a, double b, std::size_t n = 32) {
  const QuadratureRule q = gauss_legendre(n, a, b);
  decltype(f(a)) acc = q.weights[0] * f(q.nodes[0]);
  for (Eigen::Index i = 1; i < q.nodes.size(); ++i) acc += q.weights[i] * f(q.nodes[i]);
  return acc;
}

}  // namespace dtn
