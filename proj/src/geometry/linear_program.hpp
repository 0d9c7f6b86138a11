#pragma once

#include <Eigen/Core>

namespace dtn::detail {

/// max cᵀu subject to A u ≤ b, u ≥ 0, for b ≥ 0 (the origin is feasible).
/// Dense tableau simplex; Dantzig pricing with a switch to Bland's rule after a
/// run of degenerate pivots. Throws std::runtime_error if the LP is unbounded
/// or the iteration cap is reached.
double maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace dtn::detail
