#pragma once

#include "dtnlab/boundary.hpp"
#include "dtnlab/fem.hpp"
#include "dtnlab/potential.hpp"
#include "dtnlab/rotational.hpp"

#include <Eigen/Core>

#include <memory>
#include <string>

namespace dtn {

enum class Provenance { exact_spectral, fem_schur };

std::string to_string(Provenance p);

/// Discrete self-adjoint DtN operator as an M_Γ-orthonormal eigendecomposition:
/// φ_kᵀ W φ_l = δ_kl with W = diag(boundary weights), eigenvalues ascending.
/// Exact operators additionally carry the per-mode structure, which lets
/// kernels be evaluated with more Fourier modes than there are nodes.
struct DtnOperator {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::shared_ptr<const BoundarySpace> boundary;
  PotentialField potential;
  Provenance provenance = Provenance::fem_schur;
  std::shared_ptr<const RotationalSpectrum> rotational;
  /// Multiplies the mode count chosen by the truncation rule (refinement studies).
  double mode_factor = 1.0;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(eigenvectors.rows()); }
  [[nodiscard]] std::size_t rank() const { return static_cast<std::size_t>(eigenvalues.size()); }
  [[nodiscard]] const Eigen::VectorXd& weights() const { return boundary->weights; }
  /// Smallest eigenvalue (λ_1 in the decay factor e^{−λ_1 t}).
  [[nodiscard]] double ground_eigenvalue() const { return eigenvalues[0]; }
  /// M_Γ Φ Λ Φᵀ M_Γ.
  [[nodiscard]] Eigen::MatrixXd matrix() const;
};

/// Generalized eigenproblem N φ = λ M_Γ φ for the Schur complement of sys.
/// Throws std::runtime_error with the worst residual if the solve is inaccurate.
DtnOperator schur_dtn(const StiffnessSystem& sys);

/// Exact operator on the unit disk for constant V ≥ 0, Fourier modes |m| ≤ max_mode
/// (capped at n/2 − 1 so the sampled modes stay orthonormal). Throws for other domains.
DtnOperator exact_disk_dtn(std::shared_ptr<const BoundarySpace> b, const PotentialField& V, std::size_t max_mode);

/// Exact operator on the disk or an annulus for constant V ≥ 0.
DtnOperator exact_rotational_dtn(std::shared_ptr<const BoundarySpace> b, const PotentialField& V,
                                 std::size_t max_mode);

/// Mesh, assemble and eliminate in one call.
DtnOperator fem_dtn(const PlanarDomain& domain, const PotentialField& V, std::size_t n_nodes,
                    const AssemblyOptions& options = {});

}  // namespace dtn
