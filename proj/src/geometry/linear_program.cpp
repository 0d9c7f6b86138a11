#include "linear_program.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace dtn::detail {

double maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw std::invalid_argument("maximize: dimension mismatch");
  if ((b.array() < 0.0).any()) throw std::invalid_argument("maximize: right-hand side must be >= 0");

  // Row 0 holds reduced costs, column n+m the right-hand side.
  const Eigen::Index cols = n + m + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, cols);
  T.block(1, 0, m, n) = A;
  T.block(1, n, m, m).setIdentity();
  T.block(1, cols - 1, m, 1) = b;
  T.block(0, 0, 1, n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  constexpr double eps = 1e-11;
  const long cap = 50 * (m + n) + 1000;
  int degenerate_run = 0;
  for (long iter = 0; iter < cap; ++iter) {
    const bool bland = degenerate_run > 50;
    Eigen::Index enter = -1;
    double best = -eps;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (T(0, j) < best) {
        enter = j;
        if (bland) break;
        best = T(0, j);
      }
    }
    if (enter < 0) return T(0, cols - 1);

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i <= m; ++i) {
      const double a = T(i, enter);
      if (a > eps) {
        const double r = T(i, cols - 1) / a;
        if (r < ratio - 1e-14 ||
            (r <= ratio + 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i - 1)] < basis[static_cast<std::size_t>(leave - 1)])) {
          ratio = r;
          leave = i;
        }
      }
    }
    if (leave < 0) throw std::runtime_error("maximize: linear program is unbounded");
    degenerate_run = ratio < 1e-14 ? degenerate_run + 1 : 0;

    const double pivot = T(leave, enter);
    T.row(leave) /= pivot;
    const Eigen::RowVectorXd prow = T.row(leave);
    const Eigen::VectorXd pcol = T.col(enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave || pcol[i] == 0.0) continue;
      T.row(i) -= pcol[i] * prow;
    }
    basis[static_cast<std::size_t>(leave - 1)] = enter;
  }
  throw std::runtime_error("maximize: iteration cap reached");
}

}  // namespace dtn::detail
