#include "dtnlab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dtn {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  if (n == 1) {
    rule.nodes[0] = 0.5 * (a + b);
    rule.weights[0] = b - a;
    return rule;
  }
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<Eigen::Index>(i)] = mid - half * x;
    rule.nodes[static_cast<Eigen::Index>(n - 1 - i)] = mid + half * x;
    rule.weights[static_cast<Eigen::Index>(i)] = half * w;
    rule.weights[static_cast<Eigen::Index>(n - 1 - i)] = half * w;
  }
  return rule;
}

SimplexRule simplex_product_rule(std::size_t dimension, std::size_t nodes_per_axis) {
  if (dimension == 0) throw std::invalid_argument("simplex_product_rule: dimension must be >= 1");
  const QuadratureRule line = gauss_legendre(nodes_per_axis, 0.0, 1.0);
  std::size_t total = 1;
  for (std::size_t d = 0; d < dimension; ++d) total *= nodes_per_axis;

  SimplexRule rule{Eigen::MatrixXd(total, dimension), Eigen::VectorXd(total)};
  std::vector<std::size_t> idx(dimension, 0);
  for (std::size_t p = 0; p < total; ++p) {
    // t_j = u_j * prod_{i<j} (1 - u_i); jacobian prod_j (1 - u_j)^{k-1-j}
    double remaining = 1.0;
    double weight = 1.0;
    for (std::size_t j = 0; j < dimension; ++j) {
      const double u = line.nodes[static_cast<Eigen::Index>(idx[j])];
      rule.points(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) = u * remaining;
      weight *= line.weights[static_cast<Eigen::Index>(idx[j])] * remaining;
      remaining *= (1.0 - u);
    }
    rule.weights[static_cast<Eigen::Index>(p)] = weight;
    for (std::size_t j = 0; j < dimension; ++j) {
      if (++idx[j] < nodes_per_axis) break;
      idx[j] = 0;
    }
  }
  return rule;
}

}  // namespace dtn
