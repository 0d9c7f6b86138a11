#include "dtnlab/boundary.hpp"

#include "dtnlab/quadrature.hpp"
#include "geometry_detail.hpp"
#include "linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dtn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double BoundarySpace::min_spacing() const {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < component_count(); ++c) {
    const std::size_t lo = component_begin[c];
    const std::size_t hi = component_begin[c + 1];
    for (std::size_t a = lo; a < hi; ++a) {
      const double next = (a + 1 < hi) ? arc_position[static_cast<Eigen::Index>(a + 1)]
                                       : circumference[c];
      h = std::min(h, next - arc_position[static_cast<Eigen::Index>(a)]);
    }
  }
  return h;
}

BoundarySpace build_boundary_space(const PlanarDomain& domain, std::size_t n_nodes) {
  if (n_nodes < kMinNodesPerComponent) {
    std::ostringstream os;
    os << "build_boundary_space: " << n_nodes << " nodes per component requested, minimum is "
       << kMinNodesPerComponent;
    throw std::invalid_argument(os.str());
  }
  const std::size_t nc = domain.component_count();
  const std::size_t total = nc * n_nodes;
  BoundarySpace b(domain);
  b.nodes_per_component = n_nodes;
  b.nodes.resize(2, static_cast<Eigen::Index>(total));
  b.angles.resize(static_cast<Eigen::Index>(total));
  b.arc_position.resize(static_cast<Eigen::Index>(total));
  b.weights.resize(static_cast<Eigen::Index>(total));
  b.component_id.resize(total);
  b.component_begin.resize(nc + 1);
  b.D = 1.0;

  const QuadratureRule gl = gauss_legendre(16, 0.0, 1.0);
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t base = c * n_nodes;
    b.component_begin[c] = base;
    b.anchors.push_back(base);
    const double h = kTwoPi / static_cast<double>(n_nodes);
    // Cumulative arc length; exact for circles.
    std::vector<double> s(n_nodes + 1, 0.0);
    for (std::size_t k = 0; k < n_nodes; ++k) {
      double seg = 0.0;
      if (domain.is_circular()) {
        seg = domain.circle_radius(c) * h;
      } else {
        for (Eigen::Index q = 0; q < gl.nodes.size(); ++q)
          seg += gl.weights[q] * domain.boundary_speed(c, h * (static_cast<double>(k) + gl.nodes[q]));
        seg *= h;
      }
      s[k + 1] = s[k] + seg;
    }
    const double length = s[n_nodes];
    for (std::size_t k = 0; k < n_nodes; ++k) {
      const auto a = static_cast<Eigen::Index>(base + k);
      const double theta = h * static_cast<double>(k);
      b.angles[a] = theta;
      b.nodes.col(a) = domain.boundary_point(c, theta);
      b.arc_position[a] = s[k];
      const double prev = (k == 0) ? s[n_nodes - 1] - length : s[k - 1];
      b.weights[a] = 0.5 * (s[k + 1] - prev);
      b.component_id[base + k] = c;
    }
    b.circumference.push_back(length);
    b.diameter.push_back(0.5 * length);
    b.D += 0.5 * length;
  }
  b.component_begin[nc] = total;
  return b;
}

double geodesic_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y) {
  if (x >= b.size() || y >= b.size()) throw std::out_of_range("geodesic_distance: node index");
  const std::size_t c = b.component_id[x];
  if (c != b.component_id[y])
    throw std::invalid_argument(
        "geodesic_distance: nodes lie on different boundary components; use rho_distance");
  const double d = std::abs(b.arc_position[static_cast<Eigen::Index>(x)] -
                            b.arc_position[static_cast<Eigen::Index>(y)]);
  return std::min(d, b.circumference[c] - d);
}

namespace detail {

std::vector<double> derivative_stencil(const BoundarySpace& b, std::size_t component, std::size_t i,
                                       int order) {
  const std::size_t lo = b.component_begin[component];
  const std::size_t n = b.component_begin[component + 1] - lo;
  std::vector<double> pos(static_cast<std::size_t>(order) + 1);
  for (int j = 0; j <= order; ++j) {
    const std::size_t idx = i + static_cast<std::size_t>(j);
    const std::size_t wrap = idx / n;
    pos[static_cast<std::size_t>(j)] = b.arc_position[static_cast<Eigen::Index>(lo + idx % n)] +
                                       static_cast<double>(wrap) * b.circumference[component];
  }
  double factorial = 1.0;
  for (int j = 2; j <= order; ++j) factorial *= j;
  std::vector<double> coeff(static_cast<std::size_t>(order) + 1);
  for (int j = 0; j <= order; ++j) {
    double denom = 1.0;
    for (int m = 0; m <= order; ++m)
      if (m != j) denom *= pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(m)];
    coeff[static_cast<std::size_t>(j)] = factorial / denom;
  }
  return coeff;
}

double component_derivative_sup(const BoundarySpace& b, const Eigen::VectorXd& values,
                                std::size_t component, int k) {
  const std::size_t lo = b.component_begin[component];
  const std::size_t n = b.component_begin[component + 1] - lo;
  double sup = 0.0;
  for (int order = 1; order <= k; ++order)
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> st = derivative_stencil(b, component, i, order);
      double d = 0.0;
      for (int j = 0; j <= order; ++j)
        d += st[static_cast<std::size_t>(j)] *
             values[static_cast<Eigen::Index>(lo + (i + static_cast<std::size_t>(j)) % n)];
      sup = std::max(sup, std::abs(d));
    }
  return sup;
}

}  // namespace detail

using detail::derivative_stencil;

double smooth_geodesic_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, int k) {
  if (k < 1) throw std::invalid_argument("smooth_geodesic_distance: order must be >= 1");
  if (x >= b.size() || y >= b.size()) throw std::out_of_range("smooth_geodesic_distance: node index");
  const std::size_t c = b.component_id[x];
  if (c != b.component_id[y])
    throw std::invalid_argument("smooth_geodesic_distance: nodes lie on different components");
  if (x == y) return 0.0;
  const std::size_t lo = b.component_begin[c];
  const std::size_t n = b.component_begin[c + 1] - lo;

  // maximize u_x - u_y subject to ±(ℓ-th derivative)_i ≤ 1, u ≥ 0. Constants lie
  // in the kernel of every stencil, so the sign restriction costs nothing.
  const auto rows = static_cast<Eigen::Index>(2 * static_cast<std::size_t>(k) * n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n));
  Eigen::Index r = 0;
  for (int order = 1; order <= k; ++order) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> st = derivative_stencil(b, c, i, order);
      for (int j = 0; j <= order; ++j) {
        const auto col = static_cast<Eigen::Index>((i + static_cast<std::size_t>(j)) % n);
        A(r, col) += st[static_cast<std::size_t>(j)];
        A(r + 1, col) -= st[static_cast<std::size_t>(j)];
      }
      r += 2;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(rows);
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  obj[static_cast<Eigen::Index>(x - lo)] += 1.0;
  obj[static_cast<Eigen::Index>(y - lo)] -= 1.0;
  return detail::maximize(A, rhs, obj);
}

double rho_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, int k) {
  if (x >= b.size() || y >= b.size()) throw std::out_of_range("rho_distance: node index");
  if (k < 1) throw std::invalid_argument("rho_distance: order must be >= 1");
  auto intrinsic = [&](NodeIndex p, NodeIndex q) {
    return k == 1 ? geodesic_distance(b, p, q) : smooth_geodesic_distance(b, p, q, k);
  };
  const std::size_t ci = b.component_id[x];
  const std::size_t cj = b.component_id[y];
  if (ci == cj) return intrinsic(x, y);
  return std::max(b.D, intrinsic(x, b.anchors[ci]) + intrinsic(y, b.anchors[cj]));
}

double metric_equivalence_constant(const BoundarySpace& b, int k) {
  double c = 1.0;
  for (NodeIndex x = 0; x < b.size(); ++x)
    for (NodeIndex y = x + 1; y < b.size(); ++y) {
      const double rho = rho_distance(b, x, y, k);
      const double e = b.euclidean(x, y);
      c = std::max({c, rho / e, e / rho});
    }
  return c;
}

double discrete_derivative_sup(const BoundarySpace& b, const Eigen::VectorXd& values, int k) {
  double sup = 0.0;
  for (std::size_t c = 0; c < b.component_count(); ++c)
    sup = std::max(sup, detail::component_derivative_sup(b, values, c, k));
  return sup;
}

double witness_constraint(const BoundarySpace& b, const Eigen::VectorXd& values, int k) {
  double spread = 0.0;
  for (NodeIndex i : b.anchors)
    for (NodeIndex j : b.anchors)
      spread = std::max(spread, std::abs(values[static_cast<Eigen::Index>(i)] -
                                         values[static_cast<Eigen::Index>(j)]));
  return spread + b.D * discrete_derivative_sup(b, values, k);
}

}  // namespace dtn
