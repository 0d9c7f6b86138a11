#pragma once

#include "dtnlab/boundary.hpp"
#include "dtnlab/mesh.hpp"
#include "dtnlab/potential.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>
#include <vector>

namespace dtn {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct AssemblyOptions {
  /// Accept potentials with negative values. The discrete Dirichlet problem
  /// −Δ_D + V must then still be positive definite, which assembly verifies.
  bool allow_sign_changing = false;
};

/// P1 discretization of a_V(u, v) = ∫∇u·∇v + ∫V u v, partitioned into interior
/// (I) and boundary (B) vertices. Boundary unknowns are ordered like the
/// BoundarySpace nodes. The V term uses the lumped mass, which keeps the full
/// matrix an M-matrix on Delaunay meshes.
struct StiffnessSystem {
  std::shared_ptr<const InteriorMesh> mesh;
  std::shared_ptr<const BoundarySpace> boundary;
  PotentialField potential;

  SparseMatrix full;             // all vertices, mesh ordering
  SparseMatrix laplacian;        // V-free stiffness, mesh ordering
  Eigen::VectorXd lumped_mass;   // M_Ω per vertex
  SparseMatrix A_II, A_IB, A_BB;
  Eigen::VectorXd boundary_mass;  // M_Γ diagonal (arc-length weights)
  std::vector<int> interior_vertices;  // interior index → vertex
  double potential_min = 0.0;
  double dirichlet_ground_energy = 0.0;  // smallest eigenvalue of A_II relative to M_II

  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> interior_factor;

  [[nodiscard]] std::size_t interior_size() const { return interior_vertices.size(); }
  [[nodiscard]] std::size_t boundary_size() const { return static_cast<std::size_t>(boundary_mass.size()); }
  /// Quadratic form a_V(u, u) on a full vertex field.
  [[nodiscard]] double energy(const Eigen::VectorXd& u) const { return u.dot(full * u); }
};

/// Throws std::invalid_argument for negative V without opt-in and
/// std::runtime_error naming the first degenerate triangle.
StiffnessSystem assemble_system(std::shared_ptr<const InteriorMesh> mesh,
                                std::shared_ptr<const BoundarySpace> boundary, const PotentialField& V,
                                const AssemblyOptions& options = {});

struct HarmonicExtension {
  Eigen::VectorXd boundary_data;
  Eigen::VectorXd interior;   // values on interior vertices
  Eigen::VectorXd full;       // all vertices, mesh ordering
  double residual = 0.0;      // ‖A_II u_I + A_IB φ‖
};

/// u_I = −A_II⁻¹ A_IB φ. Throws std::runtime_error if A_II is singular.
HarmonicExtension harmonic_extension(const StiffnessSystem& sys, const Eigen::VectorXd& phi);

/// Dense Schur complement A_BB − A_BI A_II⁻¹ A_IB, symmetrized.
Eigen::MatrixXd schur_complement_matrix(const StiffnessSystem& sys);

struct CoercivityMargin {
  double mu = 0.0;
  double omega = 0.0;
};

/// Fits μ = min over sampled discrete H_V elements u of
/// (a_V(u,u) + ω‖Tr u‖²) / ‖u‖²_{W^{1,2}} at the given ω. Samples are
/// harmonic extensions of the constant and of random smooth boundary data.
CoercivityMargin coercivity_margin(const StiffnessSystem& sys, std::size_t samples, double omega = 1.0,
                                   std::uint64_t seed = 7);

}  // namespace dtn
