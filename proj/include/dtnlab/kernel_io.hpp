#pragma once

#include "dtnlab/boundary.hpp"
#include "dtnlab/semigroup.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dtn {

enum class DistanceKind { euclidean, rho };

std::string to_string(DistanceKind d);

/// Node pairs (a, b): every `stride`-th row and column.
std::vector<std::pair<NodeIndex, NodeIndex>> strided_pairs(const BoundarySpace& b, std::size_t stride);

/// CSV with header x_index,y_index,distance,re_K,im_K, one row per pair.
void write_kernel_csv(const std::filesystem::path& file, const KernelMatrix& K, const BoundarySpace& b,
                      const std::vector<std::pair<NodeIndex, NodeIndex>>& pairs,
                      DistanceKind distance = DistanceKind::euclidean);

/// Distance used by the checks: |x − y| or ρ^(1).
double node_distance(const BoundarySpace& b, NodeIndex x, NodeIndex y, DistanceKind d);

}  // namespace dtn
