#include "oracles.hpp"

#include "dtnlab/commutator.hpp"
#include "dtnlab/dtn.hpp"
#include "dtnlab/kernel_io.hpp"
#include "dtnlab/lp_norm.hpp"
#include "dtnlab/semigroup.hpp"
#include "dtnlab/subordination.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace dtn;
using Catch::Approx;

namespace {

std::shared_ptr<const DtnOperator> disk_op(std::size_t n, double c = 0.0) {
  auto b = std::make_shared<const BoundarySpace>(build_boundary_space(unit_disk(), n));
  return std::make_shared<const DtnOperator>(
      exact_rotational_dtn(b, c == 0.0 ? PotentialField::zero() : PotentialField::constant(c), n / 2 - 1));
}

double angle_gap(const BoundarySpace& b, Eigen::Index x, Eigen::Index y) { return b.angles[x] - b.angles[y]; }

}  // namespace

TEST_CASE("ComplexTime rejects the left half-plane and the imaginary axis") {
  CHECK_THROWS_AS(ComplexTime(-0.1), std::domain_error);
  CHECK_THROWS_AS(ComplexTime(Complex(0.0, 1.0)), std::domain_error);
  CHECK_NOTHROW(ComplexTime(0.0));
  CHECK_THROWS_AS(ComplexTime::polar(1.0, std::numbers::pi / 2), std::domain_error);
  CHECK(ComplexTime::polar(2.0, 0.3).modulus() == Approx(2.0));
}

TEST_CASE("folded kernel equals the closed-form Poisson kernel") {
  const auto op = disk_op(128);
  const BoundarySpace& b = *op->boundary;
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    const KernelMatrix K = kernel_matrix(*op, t);
    double worst = 0.0;
    for (Eigen::Index x = 0; x < K.size(); x += 7)
      for (Eigen::Index y = 0; y < K.size(); ++y)
        worst = std::max(worst, std::abs(K.values(x, y) - oracle::disk_poisson_kernel(t, angle_gap(b, x, y))));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("folded first derivative matches the differentiated Poisson kernel") {
  const auto op = disk_op(128);
  const BoundarySpace& b = *op->boundary;
  KernelOptions o;
  o.order_x = 1;
  const KernelMatrix K = kernel_matrix(*op, 0.5, o);
  double worst = 0.0;
  for (Eigen::Index x = 0; x < K.size(); x += 11)
    for (Eigen::Index y = 0; y < K.size(); ++y)
      worst = std::max(worst, std::abs(K.values(x, y) - oracle::disk_poisson_kernel_dtheta(0.5, angle_gap(b, x, y))));
  CHECK(worst < 1e-9);
}

TEST_CASE("semigroup equals the matrix exponential of the operator") {
  const auto op = disk_op(32, 1.0);
  // L = Φ Λ Φᵀ W acts on nodal values.
  const Eigen::MatrixXd L = op->eigenvectors * op->eigenvalues.asDiagonal() * op->eigenvectors.transpose() *
                            op->weights().asDiagonal();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> N;
  // Start inside the resolved space (drop the missing Nyquist mode).
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(32);
  for (Eigen::Index k = 0; k < op->eigenvectors.cols(); ++k) phi += N(rng) * op->eigenvectors.col(k).cast<Complex>();
  for (Complex z : {Complex(0.3, 0.0), Complex(1.0, 0.7), Complex(0.05, -0.04)}) {
    const Eigen::VectorXcd direct = oracle::expm(-z * L.cast<Complex>()) * phi;
    const Eigen::VectorXcd got = apply_semigroup(*op, z, phi);
    CHECK((got - direct).norm() < 1e-10 * phi.norm());
  }
  CHECK((apply_semigroup(*op, 0.0, phi) - phi).norm() == 0.0);
}

TEST_CASE("power semigroup is e^{-z (N+1)^m}") {
  const auto op = disk_op(32);
  const Eigen::VectorXcd phi = op->eigenvectors.col(3).cast<Complex>();
  const double lam = op->eigenvalues[3];
  const Eigen::VectorXcd got = power_semigroup(*op, 2, 0.1, phi);
  CHECK((got - std::exp(-0.1 * (lam + 1) * (lam + 1)) * phi).norm() < 1e-13);
  CHECK_THROWS(power_semigroup(*op, 0, 0.1, phi));
}

TEST_CASE("subordinated exponential reproduces e^{-ta}") {
  for (double a : {0.0, 0.5, 1.0, 5.0, 20.0}) {
    for (double t : {0.1, 1.0, 4.0}) {
      const SubordinationResult r = subordinated_exponential(t, a);
      CHECK(std::abs(r.value - std::exp(-t * a)) < 1e-9);
      CHECK(r.error_estimate < 1e-8);
    }
  }
  const ComplexTime z = ComplexTime::polar(1.0, 1.0);
  CHECK(std::abs(subordinated_exponential(z, 2.0).value - std::exp(-z.value() * 2.0)) < 1e-9);
}

TEST_CASE("subordination density integrates to one and moments match Gamma closed form") {
  for (double beta : {-1.0, -0.5, 0.0, 0.25, 0.4}) {
    CHECK(subordination_moment(beta) == Approx(oracle::subordinator_moment(beta)).epsilon(1e-7));
  }
  CHECK(std::abs(subordination_density(1.0, 0.25) -
                 1.0 / std::sqrt(4 * std::numbers::pi) * std::pow(0.25, -1.5) * std::exp(-1.0)) < 1e-14);
}

TEST_CASE("spectral multipliers: contraction and imaginary powers") {
  const auto op = disk_op(64, 0.5);
  MultiplierSpec is;
  is.f = [](double l) { return std::pow(Complex(l, 0.0), Complex(0.0, 0.7)); };
  is.name = "N^{0.7i}";
  CHECK(multiplier_sup(*op, is) == Approx(1.0));
  const Eigen::VectorXcd phi = op->eigenvectors.col(5).cast<Complex>();
  const Eigen::VectorXcd out = spectral_multiplier(*op, is, phi);
  CHECK(lp_norm(out, op->weights(), 2.0) == Approx(lp_norm(phi, op->weights(), 2.0)));
  // At V = 0 the ground eigenvalue vanishes: an imaginary power needs a value at 0.
  const auto harmonic = disk_op(64);
  CHECK_THROWS_AS(spectral_multiplier(*harmonic, is, phi), std::domain_error);
  is.value_at_zero = Complex(0.0);
  CHECK_NOTHROW(spectral_multiplier(*harmonic, is, phi));
}

TEST_CASE("Duhamel residuals against the matrix exponential") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  Eigen::MatrixXd A(4, 4), B = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = N(rng);
  A = (0.5 * (A + A.transpose()) + 4 * Eigen::MatrixXd::Identity(4, 4)).eval();
  for (int i = 0; i < 4; ++i) B(i, i) = N(rng);
  const DuhamelResult one = duhamel_residual(A, B, 0.7, 1);
  const DuhamelResult two = duhamel_residual(A, B, 0.7, 2);
  CHECK(one.residual < 1e-10);
  CHECK(two.residual < 1e-8);
  // Independent direct side: δ_B(e^{−zA}) from the Taylor/squaring exponential.
  const Eigen::MatrixXcd E = oracle::expm(-0.7 * A.cast<Complex>());
  const Eigen::MatrixXcd dE = B.cast<Complex>() * E - E * B.cast<Complex>();
  CHECK((one.direct - dE).norm() < 1e-12);
  // Commuting pair: both sides vanish exactly.
  const DuhamelResult comm = duhamel_residual(Eigen::MatrixXd(B.cwiseAbs()), B, 1.0, 2);
  CHECK(comm.residual == 0.0);
}

TEST_CASE("weighted operator norms match brute-force values") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int n = 6;
  Eigen::MatrixXcd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = U(rng);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 + std::abs(U(rng));
  // 1 → ∞: sup |K_ab| (point masses φ = δ_b / w_b).
  const OperatorNormResult inf = operator_norm(K, w, 1.0, kInf);
  CHECK(inf.exact);
  CHECK(inf.value == Approx(K.cwiseAbs().maxCoeff()));
  // ∞ → ∞: max_a Σ_b w_b |K_ab|.
  CHECK(operator_norm(K, w, kInf, kInf).value == Approx((K.cwiseAbs() * w).maxCoeff()));
  // 2 → 2 against a dense sweep over random directions (lower bound) and the SVD.
  const Eigen::MatrixXcd M = w.cwiseSqrt().asDiagonal() * K * w.cwiseSqrt().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  CHECK(operator_norm(K, w, 2.0, 2.0).value == Approx(svd.singularValues()[0]));
  // p = 3, q = 1.5 by power iteration: no random direction beats it.
  const Eigen::MatrixXd Kr = K.real();
  const double est = operator_norm(Kr.cast<Complex>(), w, 3.0, 1.5).value;
  double brute = 0.0;
  for (int trial = 0; trial < 20000; ++trial) {
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = U(rng);
    const Eigen::VectorXd out = Kr * w.asDiagonal() * phi;
    brute = std::max(brute, lp_norm(out, w, 1.5) / lp_norm(phi, w, 3.0));
  }
  CHECK(est >= brute * (1 - 1e-9));
  CHECK(est <= brute * 1.05);
}

TEST_CASE("kernel CSV slice layout") {
  const auto op = disk_op(32);
  const auto file = std::filesystem::temp_directory_path() / "dtnlab-test-kernel.csv";
  const KernelMatrix K = kernel_matrix(*op, 1.0);
  write_kernel_csv(file, K, *op->boundary, strided_pairs(*op->boundary, 8), DistanceKind::rho);
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x_index,y_index,distance,re_K,im_K");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16);
}
