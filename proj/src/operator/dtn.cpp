#include "dtnlab/dtn.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dtn {

std::string to_string(Provenance p) { return p == Provenance::exact_spectral ? "exact-spectral" : "fem-schur"; }

Eigen::MatrixXd DtnOperator::matrix() const {
  const Eigen::MatrixXd WPhi = weights().asDiagonal() * eigenvectors;
  return WPhi * eigenvalues.asDiagonal() * WPhi.transpose();
}

DtnOperator schur_dtn(const StiffnessSystem& sys) {
  const Eigen::MatrixXd N = schur_complement_matrix(sys);
  const Eigen::VectorXd w = sys.boundary_mass;
  const Eigen::VectorXd inv_sqrt = w.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd S = inv_sqrt.asDiagonal() * N * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("schur_dtn: symmetric eigensolver failed");

  DtnOperator op;
  op.eigenvalues = es.eigenvalues();
  op.eigenvectors = inv_sqrt.asDiagonal() * es.eigenvectors();
  op.boundary = sys.boundary;
  op.potential = sys.potential;
  op.provenance = Provenance::fem_schur;

  const Eigen::MatrixXd R = N * op.eigenvectors - w.asDiagonal() * op.eigenvectors * op.eigenvalues.asDiagonal();
  const double scale = std::max(1.0, N.cwiseAbs().maxCoeff());
  const double worst = R.cwiseAbs().maxCoeff() / scale;
  if (!(worst < 1e-8)) {
    std::ostringstream os;
    os << "schur_dtn: generalized eigenpairs inaccurate, max residual " << worst << " relative to ‖N‖";
    throw std::runtime_error(os.str());
  }
  return op;
}

DtnOperator exact_rotational_dtn(std::shared_ptr<const BoundarySpace> b, const PotentialField& V,
                                 std::size_t max_mode) {
  if (!b) throw std::invalid_argument("exact_rotational_dtn: boundary required");
  if (!b->domain.is_circular())
    throw std::invalid_argument("exact_rotational_dtn: exact spectra need the unit disk or an annulus");
  if (!V.is_constant())
    throw std::invalid_argument("exact_rotational_dtn: exact spectra need a constant potential");
  const double c = V.constant_value();
  if (c < 0.0) throw std::invalid_argument("exact_rotational_dtn: potential must be nonnegative");

  std::vector<double> radii;
  for (std::size_t k = 0; k < b->component_count(); ++k) radii.push_back(b->domain.circle_radius(k));
  auto spectrum = std::make_shared<const RotationalSpectrum>(radii, c);

  const std::size_t n = b->nodes_per_component;
  const std::size_t top = std::min(max_mode, n / 2 - 1);
  const std::vector<ModeBlock> blocks = spectrum->modes(top + 1);
  const std::size_t nc = radii.size();

  // (eigenvalue, mode, block column, sine?) sorted ascending.
  std::vector<std::tuple<double, std::size_t, Eigen::Index, int>> pairs;
  for (std::size_t m = 0; m <= top; ++m)
    for (Eigen::Index e = 0; e < blocks[m].values.size(); ++e) {
      pairs.emplace_back(blocks[m].values[e], m, e, 0);
      if (m > 0) pairs.emplace_back(blocks[m].values[e], m, e, 1);
    }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });

  DtnOperator op;
  op.boundary = b;
  op.potential = V;
  op.provenance = Provenance::exact_spectral;
  op.rotational = spectrum;
  op.eigenvalues.resize(static_cast<Eigen::Index>(pairs.size()));
  op.eigenvectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b->size()), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [value, m, e, sine] = pairs[p];
    op.eigenvalues[static_cast<Eigen::Index>(p)] = value;
    for (std::size_t comp = 0; comp < nc; ++comp) {
      const double R = radii[comp];
      const double norm = m == 0 ? std::sqrt(2.0 * std::numbers::pi * R) : std::sqrt(std::numbers::pi * R);
      const double amp = blocks[m].vectors(static_cast<Eigen::Index>(comp), e) / norm;
      for (std::size_t a = b->component_begin[comp]; a < b->component_begin[comp + 1]; ++a) {
        const double arg = static_cast<double>(m) * b->angles[static_cast<Eigen::Index>(a)];
        op.eigenvectors(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p)) =
            amp * (sine ? std::sin(arg) : std::cos(arg));
      }
    }
  }
  return op;
}

DtnOperator exact_disk_dtn(std::shared_ptr<const BoundarySpace> b, const PotentialField& V, std::size_t max_mode) {
  if (!b || b->domain.kind() != DomainKind::unit_disk)
    throw std::invalid_argument("exact_disk_dtn: domain must be the unit disk");
  return exact_rotational_dtn(std::move(b), V, max_mode);
}

DtnOperator fem_dtn(const PlanarDomain& domain, const PotentialField& V, std::size_t n_nodes,
                    const AssemblyOptions& options) {
  auto b = std::make_shared<const BoundarySpace>(build_boundary_space(domain, n_nodes));
  auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
  return schur_dtn(assemble_system(mesh, b, V, options));
}

}  // namespace dtn
