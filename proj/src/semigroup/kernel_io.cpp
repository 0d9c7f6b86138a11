#include "dtnlab/kernel_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dtn {

std::string to_string(DistanceKind d) { return d == DistanceKind::rho ? "rho" : "euclidean"; }

double node_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, DistanceKind d) {
  return d == DistanceKind::rho ? rho_distance(b, x, y, 1) : b.euclidean(x, y);
}

std::vector<std::pair<NodeIndex, NodeIndex>> strided_pairs(const BoundarySpace& b, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("strided_pairs: stride must be positive");
  std::vector<std::pair<NodeIndex, NodeIndex>> out;
  for (NodeIndex a = 0; a < b.size(); a += stride)
    for (NodeIndex c = 0; c < b.size(); c += stride) out.emplace_back(a, c);
  return out;
}

void write_kernel_csv(const std::filesystem::path& file, const KernelMatrix& K, const BoundarySpace& b,
                      const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs, DistanceKind distance) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream os(file);
  if (!os) throw std::runtime_error("write_kernel_csv: cannot open " + file.string());
  os << "x_index,y_index,distance,re_K,im_K\n";
  char line[160];
  for (const auto& [x, y] : pairs) {
    const Complex v = K.values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g,%.17g\n", x, y, node_distance(b, x, y, distance), v.real(),
                  v.imag());
    os << line;
  }
  if (!os) throw std::runtime_error("write_kernel_csv: write failed for " + file.string());
}

}  // namespace dtn
