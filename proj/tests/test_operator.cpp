#include "oracles.hpp"

#include "dtnlab/bessel.hpp"
#include "dtnlab/cache.hpp"
#include "dtnlab/dtn.hpp"
#include "dtnlab/fem.hpp"
#include "dtnlab/mesh.hpp"
#include "dtnlab/rotational.hpp"
#include "dtnlab/semigroup.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace dtn;
using Catch::Approx;

namespace {

std::shared_ptr<const BoundarySpace> disk_boundary(std::size_t n) {
  return std::make_shared<const BoundarySpace>(build_boundary_space(unit_disk(), n));
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dtnlab-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("Bessel ratio eigenvalues agree with radial shooting") {
  for (double c : {0.25, 1.0, 4.0}) {
    for (int m = 0; m <= 6; ++m) {
      CHECK(disk_mode_eigenvalue(static_cast<std::size_t>(m), c) ==
            Approx(oracle::radial_shooting_disk(m, c)).epsilon(1e-8));
    }
  }
  CHECK(disk_mode_eigenvalue(3, 0.0) == Approx(3.0));
}

TEST_CASE("annulus mode blocks agree with two-shot oracle") {
  const RotationalSpectrum spec({0.5, 1.0}, 1.0);
  const auto blocks = spec.modes(5);
  for (int m = 0; m < 5; ++m) {
    const auto [lo, hi] = oracle::annulus_mode_eigenvalues(m, 1.0, 0.5, 1.0);
    CHECK(blocks[static_cast<std::size_t>(m)].values[0] == Approx(lo).epsilon(1e-7));
    CHECK(blocks[static_cast<std::size_t>(m)].values[1] == Approx(hi).epsilon(1e-7));
  }
  // V = 0, m = 0: constants are harmonic.
  const RotationalSpectrum harmonic({0.5, 1.0}, 0.0);
  CHECK(harmonic.modes(1)[0].values[0] == Approx(0.0).margin(1e-12));
}

TEST_CASE("exact disk operator: integer spectrum and mass-orthonormal modes") {
  const DtnOperator op = exact_disk_dtn(disk_boundary(64), PotentialField::zero(), 31);
  REQUIRE(op.rank() == 63);
  CHECK(op.eigenvalues[0] == Approx(0.0).margin(1e-12));
  for (int k = 1; k <= 30; ++k) CHECK(op.eigenvalues[2 * k - 1] == Approx(k));
  const Eigen::MatrixXd G = op.eigenvectors.transpose() * op.weights().asDiagonal() * op.eigenvectors;
  CHECK((G - Eigen::MatrixXd::Identity(63, 63)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(exact_disk_dtn(disk_boundary(64), PotentialField::constant(-1.0), 10));
}

TEST_CASE("FEM Schur complement: V = 0 annihilates constants, spectrum converges") {
  const DtnOperator coarse = fem_dtn(unit_disk(), PotentialField::zero(), 64);
  const DtnOperator fine = fem_dtn(unit_disk(), PotentialField::zero(), 128);
  CHECK(std::abs(fine.eigenvalues[0]) < 1e-9);
  for (int k = 1; k <= 4; ++k) {
    const double e_coarse = std::abs(coarse.eigenvalues[2 * k - 1] - k) / k;
    const double e_fine = std::abs(fine.eigenvalues[2 * k - 1] - k) / k;
    CHECK(e_fine < e_coarse);
    CHECK(e_fine < 0.01);
  }
}

TEST_CASE("FEM full matrix is an M-matrix and the DtN has nonpositive off-diagonals") {
  auto b = disk_boundary(48);
  auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
  const StiffnessSystem sys = assemble_system(mesh, b, PotentialField::constant(1.0));
  const Eigen::MatrixXd N = schur_complement_matrix(sys);
  double worst = -1.0;
  for (Eigen::Index i = 0; i < N.rows(); ++i)
    for (Eigen::Index j = 0; j < N.cols(); ++j)
      if (i != j) worst = std::max(worst, N(i, j));
  CHECK(worst <= 1e-12);
  CHECK((N - N.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("harmonic extension matches the disk harmonic polynomial") {
  auto b = disk_boundary(96);
  auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
  const StiffnessSystem sys = assemble_system(mesh, b, PotentialField::zero());
  // φ = x² − y² extends as itself.
  Eigen::VectorXd phi(static_cast<Eigen::Index>(b->size()));
  for (Eigen::Index a = 0; a < phi.size(); ++a) phi[a] = b->nodes(0, a) * b->nodes(0, a) - b->nodes(1, a) * b->nodes(1, a);
  const HarmonicExtension u = harmonic_extension(sys, phi);
  double worst = 0.0;
  for (Eigen::Index v = 0; v < mesh->vertices.cols(); ++v) {
    const double x = mesh->vertices(0, v), y = mesh->vertices(1, v);
    worst = std::max(worst, std::abs(u.full[v] - (x * x - y * y)));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("coercivity margin is positive for V >= 0 with a nonzero part") {
  auto b = disk_boundary(48);
  auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
  const StiffnessSystem sys = assemble_system(mesh, b, PotentialField::constant(1.0));
  CHECK(coercivity_margin(sys, 24, 1.0, 3).mu > 0.0);
}

TEST_CASE("sign-changing potential is rejected unless allowed") {
  auto b = disk_boundary(32);
  auto mesh = std::make_shared<const InteriorMesh>(build_interior_mesh(*b));
  const PotentialField V = PotentialField::general([](double x, double) { return x; }, "x");
  CHECK_THROWS(assemble_system(mesh, b, V));
  AssemblyOptions allow;
  allow.allow_sign_changing = true;
  CHECK_NOTHROW(assemble_system(mesh, b, V, allow));
}

TEST_CASE("cross-backend equivalence: FEM kernel within 10% of the exact kernel") {
  const DtnOperator exact = exact_rotational_dtn(disk_boundary(128), PotentialField::constant(1.0), 63);
  const DtnOperator fem = fem_dtn(unit_disk(), PotentialField::constant(1.0), 128);
  for (double t : {0.3, 1.0}) {
    const Eigen::MatrixXd Ke = kernel_matrix(exact, t, {KernelEvaluation::eigenpairs}).real();
    const Eigen::MatrixXd Kf = kernel_matrix(fem, t, {KernelEvaluation::eigenpairs}).real();
    CHECK(((Ke - Kf).cwiseAbs().maxCoeff() / Ke.cwiseAbs().maxCoeff()) < 0.1);
  }
  // Annulus spectra too.
  const auto ann = std::make_shared<const BoundarySpace>(build_boundary_space(annulus(0.5, 1.0), 96));
  const DtnOperator ae = exact_rotational_dtn(ann, PotentialField::zero(), 47);
  const DtnOperator af = fem_dtn(annulus(0.5, 1.0), PotentialField::zero(), 96);
  for (int k = 1; k < 8; ++k) CHECK(af.eigenvalues[k] == Approx(ae.eigenvalues[k]).epsilon(0.1));
}

TEST_CASE("operator cache round trip, stale detection") {
  const auto dir = scratch("cache");
  auto b = disk_boundary(64);
  const PotentialField V = PotentialField::constant(0.5);
  const DtnOperator op = exact_rotational_dtn(b, V, 31);
  const std::string key = operator_cache_key(b->domain, V, op.provenance, 64, 31);
  const auto file = cache_path(dir, key);
  CHECK(load_operator(file, key, b, V).status == CacheStatus::missing);
  save_operator(file, key, op);
  const CacheLookup hit = load_operator(file, key, b, V);
  REQUIRE(hit.status == CacheStatus::hit);
  CHECK(hit.op->eigenvalues == op.eigenvalues);
  CHECK(hit.op->eigenvectors == op.eigenvectors);
  CHECK(hit.op->provenance == op.provenance);
  REQUIRE(hit.op->rotational);
  CHECK(hit.op->rotational->potential() == 0.5);

  // Same file read under another key, or truncated, is stale.
  CHECK(load_operator(file, key + "x", b, V).status == CacheStatus::stale);
  std::filesystem::resize_file(file, 40);
  CHECK(load_operator(file, key, b, V).status == CacheStatus::stale);
}

TEST_CASE("content hash is the git blob hash") {
  // `printf 'hello\n' | git hash-object --stdin`
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}
