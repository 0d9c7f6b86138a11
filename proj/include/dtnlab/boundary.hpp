#pragma once

#include "dtnlab/domain.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace dtn {

using NodeIndex = std::size_t;

/// Boundary nodes with arc-length quadrature and the component structure
/// needed for the boundary metric ρ. Nodes of one component are contiguous and
/// ordered by arc length; component c occupies [component_begin[c], component_begin[c+1]).
struct BoundarySpace {
  explicit BoundarySpace(PlanarDomain d) : domain(std::move(d)) {}

  PlanarDomain domain;
  std::size_t nodes_per_component = 0;
  Eigen::Matrix2Xd nodes;               // node coordinates
  Eigen::VectorXd angles;               // parameter θ of each node
  Eigen::VectorXd arc_position;         // arc length from the component's first node
  Eigen::VectorXd weights;              // arc-length quadrature weights
  std::vector<std::size_t> component_id;
  std::vector<std::size_t> component_begin;  // size component_count()+1
  std::vector<NodeIndex> anchors;            // first node of every component
  std::vector<double> circumference;
  std::vector<double> diameter;              // intrinsic: half the circumference
  double D = 1.0;                            // 1 + Σ diameter

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nodes.cols()); }
  [[nodiscard]] std::size_t component_count() const { return circumference.size(); }
  [[nodiscard]] double euclidean(NodeIndex x, NodeIndex y) const {
    return (nodes.col(static_cast<Eigen::Index>(x)) - nodes.col(static_cast<Eigen::Index>(y))).norm();
  }
  [[nodiscard]] double min_spacing() const;
};

inline constexpr std::size_t kMinNodesPerComponent = 16;

/// Places n_nodes nodes on every boundary component at θ_k = 2πk/n.
/// Throws std::invalid_argument when n_nodes < kMinNodesPerComponent.
BoundarySpace build_boundary_space(const PlanarDomain& domain, std::size_t n_nodes);

/// Shortest arc along the common component. Throws std::invalid_argument for
/// nodes on different components (use rho_distance there).
double geodesic_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y);

/// Intrinsic distance for the order-k class: sup of g(x) - g(y) over node
/// functions on one component whose discrete derivatives of orders 1..k are
/// bounded by 1. Solved as a linear program; equals geodesic_distance for k = 1.
double smooth_geodesic_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, int k);

/// The boundary metric ρ^(k). Same component: the intrinsic distance of
/// order k. Different components i ≠ j: max(D, d_i(x, x_i) + d_j(y, x_j)) with
/// x_i, x_j the component anchors.
double rho_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, int k = 1);

/// Smallest c with c⁻¹|x−y| ≤ ρ(x,y) ≤ c|x−y| over all distinct node pairs.
double metric_equivalence_constant(const BoundarySpace& b, int k = 1);

/// Node function in the discrete class W (k = 1) or W_k.
struct LipschitzWitness {
  Eigen::VectorXd values;
  std::vector<double> anchor_offsets;  // g(x_i) per component
  int order = 1;
};

/// max_ℓ≤k sup |ℓ-th discrete derivative| along each component (ℓ! times the
/// divided difference over consecutive nodes in arc length).
double discrete_derivative_sup(const BoundarySpace& b, const Eigen::VectorXd& values, int k);

/// Left-hand side of the membership constraint:
/// max_{i,j}|g(x_i) − g(x_j)| + D · discrete_derivative_sup(g, k). Members satisfy ≤ D.
double witness_constraint(const BoundarySpace& b, const Eigen::VectorXd& values, int k);

[[nodiscard]] inline bool is_admissible(const BoundarySpace& b, const LipschitzWitness& g,
                                        double rel_tol = 1e-12) {
  return witness_constraint(b, g.values, g.order) <= b.D * (1.0 + rel_tol);
}

/// Parametric description of a witness, independent of the node set so the
/// same function can be realized on refined boundaries.
struct WitnessSpec {
  enum class Family { cone, fourier } family = Family::cone;
  std::size_t component = 0;      // component carrying the cone / primary shape
  double center = 0.0;            // cone apex as fraction of the circumference
  double clip = 1e300;            // cone clipped at this arc distance
  std::vector<std::vector<double>> fourier;  // per component: a_1, b_1, a_2, b_2, ...
  double slope = 1.0;             // s ∈ [0, 1]: derivative bound used
  std::vector<double> offsets;    // per component, in units of D(1 − s), each in [0, 1]
  int smoothing_passes = 0;       // local averaging passes used for k > 1
  int order = 1;
};

/// Draws a random witness description. Deterministic for a given engine state.
WitnessSpec draw_witness_spec(const BoundarySpace& b, int k, std::mt19937_64& rng);

/// Evaluates the description on b's nodes and rescales it into W_k.
LipschitzWitness realize_witness(const BoundarySpace& b, const WitnessSpec& spec);

/// Certified lower bound for ρ^(k)(x, y): max |g(x) − g(y)| over n_samples
/// sampled admissible witnesses.
double rho_oracle_sample(const BoundarySpace& b, NodeIndex x, NodeIndex y, std::size_t n_samples,
                         int k = 1, std::uint64_t seed = 1);

}  // namespace dtn
