#include "dtnlab/fem.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dtn {

namespace {

constexpr const char* kDirichletHypothesis = "0 ∉ σ(−Δ_D + V)";

// Smallest generalized eigenvalue of (A, diag(m)) by inverse iteration.
double ground_energy(const Eigen::SimplicialLDLT<SparseMatrix>& solver, const SparseMatrix& A,
                     const Eigen::VectorXd& m) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(A.rows());
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd y = solver.solve(m.cwiseProduct(x));
    const double norm = std::sqrt(y.dot(m.cwiseProduct(y)));
    if (!(norm > 0.0)) break;
    y /= norm;
    const double next = y.dot(A * y);
    x = y;
    if (it > 0 && std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

StiffnessSystem assemble_system(std::shared_ptr<const InteriorMesh> mesh,
                                std::shared_ptr<const BoundarySpace> boundary, const PotentialField& V,
                                const AssemblyOptions& options) {
  if (!mesh || !boundary) throw std::invalid_argument("assemble_system: mesh and boundary required");
  const auto nv = static_cast<Eigen::Index>(mesh->vertex_count());
  if (mesh->boundary_vertex.size() != boundary->size())
    throw std::invalid_argument("assemble_system: mesh does not match the boundary space");

  StiffnessSystem sys;
  sys.mesh = mesh;
  sys.boundary = boundary;
  sys.potential = V;
  sys.lumped_mass = Eigen::VectorXd::Zero(nv);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh->triangles.size() * 9);
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    const auto& tri = mesh->triangles[t];
    const double area = mesh->triangle_area(t);
    if (!(area > 1e-14)) {
      std::ostringstream os;
      os << "assemble_system: degenerate triangle " << t << " (vertices " << tri[0] << ", " << tri[1] << ", "
         << tri[2] << ", area " << area << ")";
      throw std::runtime_error(os.str());
    }
    Eigen::Matrix<double, 2, 3> grad;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d p = mesh->vertices.col(tri[(i + 1) % 3]);
      const Eigen::Vector2d q = mesh->vertices.col(tri[(i + 2) % 3]);
      grad.col(i) = Eigen::Vector2d(p.y() - q.y(), q.x() - p.x()) / (2.0 * area);
    }
    for (int i = 0; i < 3; ++i) {
      sys.lumped_mass[tri[i]] += area / 3.0;
      for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], area * grad.col(i).dot(grad.col(j)));
    }
  }
  sys.laplacian.resize(nv, nv);
  sys.laplacian.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd vmass(nv);
  double vmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index v = 0; v < nv; ++v) {
    const double value = V(mesh->vertices.col(v));
    if (!std::isfinite(value)) throw std::invalid_argument("assemble_system: potential is not finite");
    vmin = std::min(vmin, value);
    vmass[v] = value * sys.lumped_mass[v];
  }
  sys.potential_min = vmin;
  if (vmin < 0.0 && !options.allow_sign_changing)
    throw std::invalid_argument(
        "assemble_system: potential takes negative values; set allow_sign_changing to opt in");
  sys.full = sys.laplacian;
  for (Eigen::Index v = 0; v < nv; ++v) sys.full.coeffRef(v, v) += vmass[v];
  sys.full.makeCompressed();

  // Partition.
  std::vector<int> local(static_cast<std::size_t>(nv), -1);
  for (Eigen::Index v = 0; v < nv; ++v)
    if (mesh->boundary_node[static_cast<std::size_t>(v)] < 0) {
      local[static_cast<std::size_t>(v)] = static_cast<int>(sys.interior_vertices.size());
      sys.interior_vertices.push_back(static_cast<int>(v));
    }
  const auto ni = static_cast<Eigen::Index>(sys.interior_vertices.size());
  const auto nb = static_cast<Eigen::Index>(boundary->size());
  std::vector<Eigen::Triplet<double>> tii, tib, tbb;
  for (Eigen::Index col = 0; col < sys.full.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(sys.full, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      const int br = mesh->boundary_node[static_cast<std::size_t>(r)];
      const int bc = mesh->boundary_node[static_cast<std::size_t>(c)];
      if (br < 0 && bc < 0) tii.emplace_back(local[static_cast<std::size_t>(r)], local[static_cast<std::size_t>(c)], it.value());
      else if (br < 0) tib.emplace_back(local[static_cast<std::size_t>(r)], bc, it.value());
      else if (bc >= 0) tbb.emplace_back(br, bc, it.value());
    }
  sys.A_II.resize(ni, ni);
  sys.A_II.setFromTriplets(tii.begin(), tii.end());
  sys.A_IB.resize(ni, nb);
  sys.A_IB.setFromTriplets(tib.begin(), tib.end());
  sys.A_BB.resize(nb, nb);
  sys.A_BB.setFromTriplets(tbb.begin(), tbb.end());
  sys.boundary_mass = boundary->weights;

  Eigen::VectorXd m_ii(ni);
  for (Eigen::Index i = 0; i < ni; ++i) m_ii[i] = sys.lumped_mass[sys.interior_vertices[static_cast<std::size_t>(i)]];
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(sys.A_II);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.0).all()) {
    if (options.allow_sign_changing)
      throw std::invalid_argument(std::string("assemble_system: discrete Dirichlet problem is not positive definite; "
                                              "hypothesis ") + kDirichletHypothesis + " with −Δ_D + V ≥ 0 fails");
    throw std::runtime_error(std::string("assemble_system: A_II is singular, hypothesis ") + kDirichletHypothesis +
                             " violated");
  }
  sys.dirichlet_ground_energy = ground_energy(ldlt, sys.A_II, m_ii);
  if (!(sys.dirichlet_ground_energy > 0.0))
    throw std::invalid_argument(std::string("assemble_system: hypothesis ") + kDirichletHypothesis + " fails");

  auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(sys.A_II);
  if (llt->info() == Eigen::Success) sys.interior_factor = std::move(llt);
  return sys;
}

HarmonicExtension harmonic_extension(const StiffnessSystem& sys, const Eigen::VectorXd& phi) {
  if (!sys.interior_factor)
    throw std::runtime_error(std::string("harmonic_extension: A_II is singular, hypothesis ") + kDirichletHypothesis +
                             " violated");
  if (phi.size() != static_cast<Eigen::Index>(sys.boundary_size()))
    throw std::invalid_argument("harmonic_extension: boundary data has the wrong size");
  HarmonicExtension ext;
  ext.boundary_data = phi;
  const Eigen::VectorXd rhs = -(sys.A_IB * phi);
  ext.interior = sys.interior_factor->solve(rhs);
  ext.residual = (sys.A_II * ext.interior - rhs).norm();
  ext.full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.mesh->vertex_count()));
  for (std::size_t i = 0; i < sys.interior_vertices.size(); ++i)
    ext.full[sys.interior_vertices[i]] = ext.interior[static_cast<Eigen::Index>(i)];
  for (std::size_t k = 0; k < sys.boundary_size(); ++k)
    ext.full[sys.mesh->boundary_vertex[k]] = phi[static_cast<Eigen::Index>(k)];
  return ext;
}

Eigen::MatrixXd schur_complement_matrix(const StiffnessSystem& sys) {
  if (!sys.interior_factor)
    throw std::runtime_error(std::string("schur_complement_matrix: A_II is singular, hypothesis ") +
                             kDirichletHypothesis + " violated");
  const Eigen::MatrixXd rhs = Eigen::MatrixXd(sys.A_IB);
  const Eigen::MatrixXd X = sys.interior_factor->solve(rhs);
  Eigen::MatrixXd N = Eigen::MatrixXd(sys.A_BB) - Eigen::MatrixXd(sys.A_IB.transpose()) * X;
  return 0.5 * (N + N.transpose());
}

CoercivityMargin coercivity_margin(const StiffnessSystem& sys, std::size_t samples, double omega,
                                   std::uint64_t seed) {
  const BoundarySpace& b = *sys.boundary;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> modes(1, 12);

  CoercivityMargin out{std::numeric_limits<double>::infinity(), omega};
  for (std::size_t s = 0; s < std::max<std::size_t>(samples, 1); ++s) {
    Eigen::VectorXd phi = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(b.size()));
    if (s > 0) {
      phi.setZero();
      const int top = modes(rng);
      for (std::size_t c = 0; c < b.component_count(); ++c) {
        std::vector<double> coeff(static_cast<std::size_t>(2 * top + 1));
        for (double& x : coeff) x = normal(rng);
        for (std::size_t a = b.component_begin[c]; a < b.component_begin[c + 1]; ++a) {
          const double th = b.angles[static_cast<Eigen::Index>(a)];
          double v = coeff[0];
          for (int m = 1; m <= top; ++m)
            v += (coeff[static_cast<std::size_t>(2 * m - 1)] * std::cos(m * th) +
                  coeff[static_cast<std::size_t>(2 * m)] * std::sin(m * th)) / m;
          phi[static_cast<Eigen::Index>(a)] = v;
        }
      }
    }
    const HarmonicExtension u = harmonic_extension(sys, phi);
    const double form = sys.energy(u.full);
    const double trace = phi.dot(b.weights.cwiseProduct(phi));
    const double h1 = u.full.dot(sys.laplacian * u.full) + u.full.dot(sys.lumped_mass.cwiseProduct(u.full));
    out.mu = std::min(out.mu, (form + omega * trace) / h1);
  }
  return out;
}

}  // namespace dtn
