#pragma once

#include "dtnlab/boundary.hpp"

#include <vector>

namespace dtn::detail {

/// Coefficients of ℓ!·f[s_i, ..., s_{i+ℓ}] over consecutive (periodic) nodes of a component.
std::vector<double> derivative_stencil(const BoundarySpace& b, std::size_t component, std::size_t i,
                                       int order);

double component_derivative_sup(const BoundarySpace& b, const Eigen::VectorXd& values,
                                std::size_t component, int k);

}  // namespace dtn::detail
