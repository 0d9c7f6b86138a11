#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace dtn {

/// DtN eigen-structure of one Fourier mode on a rotation-invariant domain:
/// a symmetric c×c block over the circular components (c = 1 disk, 2 annulus),
/// expressed in the L₂-normalized cos/sin basis of each circle.
struct ModeBlock {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns, one entry per component
};

/// Separation-of-variables DtN operator for the unit disk or a centered
/// annulus with constant potential c ≥ 0. Radial solutions are r^{±m} (and
/// log r) for c = 0 and I_m(√c r), K_m(√c r) for c > 0.
class RotationalSpectrum {
 public:
  RotationalSpectrum(std::vector<double> radii, double potential);

  [[nodiscard]] const std::vector<double>& radii() const { return radii_; }
  [[nodiscard]] double potential() const { return potential_; }
  [[nodiscard]] std::size_t component_count() const { return radii_.size(); }
  [[nodiscard]] double max_radius() const { return radii_.back(); }

  /// Blocks for modes m = 0..count-1.
  [[nodiscard]] std::vector<ModeBlock> modes(std::size_t count) const;
  /// The unsymmetrized block matrix of mode m before diagonalization.
  [[nodiscard]] Eigen::MatrixXd block_matrix(std::size_t m) const;

 private:
  [[nodiscard]] std::vector<Eigen::MatrixXd> block_matrices(std::size_t count) const;

  std::vector<double> radii_;
  double potential_ = 0.0;
};

}  // namespace dtn
