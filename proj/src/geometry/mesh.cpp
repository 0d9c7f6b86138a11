#include "dtnlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace dtn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double signed_area(const Eigen::Matrix2Xd& v, const std::array<int, 3>& t) {
  const Eigen::Vector2d a = v.col(t[0]);
  const Eigen::Vector2d b = v.col(t[1]);
  const Eigen::Vector2d c = v.col(t[2]);
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

void push_ccw(const Eigen::Matrix2Xd& v, std::vector<std::array<int, 3>>& tris, std::array<int, 3> t) {
  if (signed_area(v, t) < 0.0) std::swap(t[1], t[2]);
  tris.push_back(t);
}

/// Triangulates the strip between two closed rings given as vertex ids in
/// increasing angle, both starting at angle zero.
void zip_rings(const Eigen::Matrix2Xd& v, const std::vector<int>& inner, const std::vector<int>& outer,
               std::vector<std::array<int, 3>>& tris) {
  const std::size_t p = inner.size();
  const std::size_t q = outer.size();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < p || j < q) {
    const double next_inner = kTwoPi * static_cast<double>(i + 1) / static_cast<double>(p);
    const double next_outer = kTwoPi * static_cast<double>(j + 1) / static_cast<double>(q);
    if (i < p && (j == q || next_inner <= next_outer)) {
      push_ccw(v, tris, {inner[i], inner[(i + 1) % p], outer[j % q]});
      ++i;
    } else {
      push_ccw(v, tris, {inner[i % p], outer[(j + 1) % q], outer[j]});
      ++j;
    }
  }
}

double angle_at(const Eigen::Matrix2Xd& v, int apex, int a, int b) {
  const Eigen::Vector2d u = v.col(a) - v.col(apex);
  const Eigen::Vector2d w = v.col(b) - v.col(apex);
  return std::atan2(std::abs(u.x() * w.y() - u.y() * w.x()), u.dot(w));
}

}  // namespace

double InteriorMesh::triangle_area(std::size_t t) const { return signed_area(vertices, triangles[t]); }

double InteriorMesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

std::size_t make_delaunay(InteriorMesh& mesh) {
  std::size_t flips = 0;
  for (int pass = 0; pass < 200; ++pass) {
    std::map<std::pair<int, int>, std::vector<std::size_t>> edges;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
      for (int e = 0; e < 3; ++e) {
        int a = mesh.triangles[t][e];
        int b = mesh.triangles[t][(e + 1) % 3];
        if (a > b) std::swap(a, b);
        edges[{a, b}].push_back(t);
      }
    std::vector<bool> touched(mesh.triangles.size(), false);
    std::size_t pass_flips = 0;
    for (const auto& [edge, tris] : edges) {
      if (tris.size() != 2 || touched[tris[0]] || touched[tris[1]]) continue;
      const auto [a, b] = edge;
      auto opposite = [&](std::size_t t) {
        for (int x : mesh.triangles[t])
          if (x != a && x != b) return x;
        return -1;
      };
      const int c = opposite(tris[0]);
      const int d = opposite(tris[1]);
      const double sum = angle_at(mesh.vertices, c, a, b) + angle_at(mesh.vertices, d, a, b);
      if (sum <= std::numbers::pi + 1e-12) continue;
      std::array<int, 3> t0{c, d, a};
      std::array<int, 3> t1{d, c, b};
      if (signed_area(mesh.vertices, t0) < 0.0) std::swap(t0[1], t0[2]);
      if (signed_area(mesh.vertices, t1) < 0.0) std::swap(t1[1], t1[2]);
      mesh.triangles[tris[0]] = t0;
      mesh.triangles[tris[1]] = t1;
      touched[tris[0]] = touched[tris[1]] = true;
      ++pass_flips;
    }
    flips += pass_flips;
    if (pass_flips == 0) break;
  }
  return flips;
}

InteriorMesh build_interior_mesh(const BoundarySpace& b) {
  const PlanarDomain& dom = b.domain;
  const std::size_t n = b.nodes_per_component;
  InteriorMesh mesh;
  std::vector<Eigen::Vector2d> pts;
  std::vector<int> bnode;
  std::vector<std::vector<int>> rings;

  auto add_ring = [&](double rho, std::size_t count, int boundary_component, auto&& place) {
    std::vector<int> ring;
    for (std::size_t k = 0; k < count; ++k) {
      const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
      ring.push_back(static_cast<int>(pts.size()));
      if (boundary_component >= 0) {
        const std::size_t node = b.component_begin[static_cast<std::size_t>(boundary_component)] + k;
        pts.emplace_back(b.nodes.col(static_cast<Eigen::Index>(node)));
        bnode.push_back(static_cast<int>(node));
      } else {
        pts.push_back(place(rho, theta));
        bnode.push_back(-1);
      }
    }
    rings.push_back(std::move(ring));
  };

  if (dom.kind() == DomainKind::annulus) {
    const double a = dom.circle_radius(0);
    const double c = dom.circle_radius(1);
    const double spacing = kTwoPi * 0.5 * (a + c) / static_cast<double>(n);
    const auto layers = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround((c - a) / spacing)));
    auto place = [](double r, double theta) { return Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta)); };
    for (std::size_t j = 0; j <= layers; ++j) {
      const double r = a + (c - a) * static_cast<double>(j) / static_cast<double>(layers);
      const int comp = j == 0 ? 0 : (j == layers ? 1 : -1);
      add_ring(r, n, comp, place);
    }
  } else {
    // Disk or star-shaped: concentric rings in the reference disk, mapped radially.
    const auto layers = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(static_cast<double>(n) / kTwoPi)));
    auto place = [&](double rho, double theta) {
      const double r = rho * dom.boundary_radius(0, theta);
      return Eigen::Vector2d(r * std::cos(theta), r * std::sin(theta));
    };
    pts.emplace_back(0.0, 0.0);
    bnode.push_back(-1);
    for (std::size_t j = 1; j <= layers; ++j) {
      const double rho = static_cast<double>(j) / static_cast<double>(layers);
      const std::size_t count =
          j == layers ? n
                      : std::max<std::size_t>(6, static_cast<std::size_t>(std::lround(static_cast<double>(n) * rho)));
      add_ring(rho, count, j == layers ? 0 : -1, place);
    }
  }

  mesh.vertices.resize(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) mesh.vertices.col(static_cast<Eigen::Index>(i)) = pts[i];
  mesh.boundary_node = std::move(bnode);

  if (dom.kind() != DomainKind::annulus) {
    const auto& first = rings.front();
    for (std::size_t k = 0; k < first.size(); ++k)
      push_ccw(mesh.vertices, mesh.triangles, {0, first[k], first[(k + 1) % first.size()]});
  }
  for (std::size_t j = 0; j + 1 < rings.size(); ++j) zip_rings(mesh.vertices, rings[j], rings[j + 1], mesh.triangles);

  make_delaunay(mesh);

  mesh.boundary_vertex.assign(b.size(), -1);
  for (std::size_t v = 0; v < mesh.boundary_node.size(); ++v)
    if (mesh.boundary_node[v] >= 0) mesh.boundary_vertex[static_cast<std::size_t>(mesh.boundary_node[v])] = static_cast<int>(v);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (!(mesh.triangle_area(t) > 0.0))
      throw std::runtime_error("build_interior_mesh: produced a degenerate triangle " + std::to_string(t));
  return mesh;
}

}  // namespace dtn
