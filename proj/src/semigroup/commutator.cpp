#include "dtnlab/commutator.hpp"

#include "dtnlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <functional>
#include <stdexcept>
#include <vector>

namespace dtn {

namespace {

void compositions(int n, std::vector<int>& parts, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(parts);
    return;
  }
  for (int j = 1; j <= n; ++j) {
    parts.push_back(j);
    compositions(n - j, parts, out);
    parts.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double spectral_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()[0];
}

}  // namespace

DuhamelResult duhamel_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const ComplexTime& z, int n,
                               int nodes) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw std::invalid_argument("duhamel_residual: A and B must be square of equal size");
  if (n < 1) throw std::domain_error("duhamel_residual: order n must be >= 1");
  if (nodes < 1) throw std::invalid_argument("duhamel_residual: need at least one quadrature node");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("duhamel_residual: A must be symmetric");

  const Complex zz = z.value();
  const Eigen::MatrixXcd Ac = A.cast<Complex>();
  const Eigen::MatrixXcd Bc = B.cast<Complex>();

  DuhamelResult out;
  Eigen::MatrixXcd direct = (-zz * Ac).exp();
  for (int i = 0; i < n; ++i) direct = bracket(Bc, direct);
  out.direct = direct;
  out.direct_norm = spectral_norm(direct);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  const Eigen::MatrixXcd U = es.eigenvectors().cast<Complex>();
  const Eigen::VectorXd alpha = es.eigenvalues();
  auto T = [&](double t) {
    Eigen::VectorXcd d(alpha.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::exp(-t * zz * alpha[i]);
    return (U * d.asDiagonal() * U.adjoint()).eval();
  };

  // δ^j(A) for j = 1..n.
  std::vector<Eigen::MatrixXcd> dA(static_cast<std::size_t>(n) + 1);
  dA[0] = Ac;
  for (int j = 1; j <= n; ++j) dA[static_cast<std::size_t>(j)] = bracket(Bc, dA[static_cast<std::size_t>(j - 1)]);

  std::vector<std::vector<int>> comps;
  std::vector<int> parts;
  compositions(n, parts, comps);

  Eigen::MatrixXcd expansion = Eigen::MatrixXcd::Zero(A.rows(), A.cols());
  for (const std::vector<int>& c : comps) {
    const int k = static_cast<int>(c.size());
    double multinomial = factorial(n);
    for (int j : c) multinomial /= factorial(j);
    const Complex coeff = std::pow(-zz, k) * multinomial;
    const SimplexRule rule = simplex_product_rule(static_cast<std::size_t>(k), static_cast<std::size_t>(nodes));
    Eigen::MatrixXcd integral = Eigen::MatrixXcd::Zero(A.rows(), A.cols());
    for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
      double used = 0.0;
      Eigen::MatrixXcd prod = T(rule.points(q, 0));
      used += rule.points(q, 0);
      for (int i = 0; i < k; ++i) {
        prod = prod * dA[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])];
        const double t = i + 1 < k ? rule.points(q, i + 1) : 1.0 - used;
        used += i + 1 < k ? t : 0.0;
        prod = prod * T(t);
      }
      integral += rule.weights[q] * prod;
    }
    expansion += coeff * integral;
  }
  out.expansion = expansion;
  out.residual = spectral_norm(direct - expansion);
  return out;
}

}  // namespace dtn
