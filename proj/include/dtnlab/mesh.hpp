#pragma once

#include "dtnlab/boundary.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <vector>

namespace dtn {

/// Conforming triangulation whose boundary vertices are exactly the nodes of a
/// BoundarySpace. Triangles are counterclockwise.
struct InteriorMesh {
  Eigen::Matrix2Xd vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_node;    // per vertex: BoundarySpace node index, or -1
  std::vector<int> boundary_vertex;  // per boundary node: vertex index

  [[nodiscard]] std::size_t vertex_count() const { return static_cast<std::size_t>(vertices.cols()); }
  [[nodiscard]] double triangle_area(std::size_t t) const;
  [[nodiscard]] double total_area() const;
};

/// Ring-based triangulation of the domain, refined to roughly isotropic cells
/// at the boundary node spacing, followed by Delaunay edge flips.
InteriorMesh build_interior_mesh(const BoundarySpace& b);

/// Lawson flips until every interior edge satisfies the empty-circle condition.
/// Returns the number of flips performed.
std::size_t make_delaunay(InteriorMesh& mesh);

}  // namespace dtn
