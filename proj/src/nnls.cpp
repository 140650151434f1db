#include "bsloc/nnls.hpp"

#include <limits>
#include <vector>

namespace bsloc {

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) return x;
  if (tol < 0.0) {
    tol = 10.0 * std::numeric_limits<double>::epsilon() *
          A.cwiseAbs().maxCoeff() * b.cwiseAbs().sum() +
          std::numeric_limits<double>::min();
  }

  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = A.transpose() * b;  // dual of x = 0
  const int max_outer = 3 * static_cast<int>(n) + 10;

  for (int outer = 0; outer < max_outer; ++outer) {
    // Most violated dual among free variables.
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) break;  // KKT satisfied
    passive[static_cast<std::size_t>(enter)] = true;

    for (;;) {
      // Unconstrained least squares on the passive columns.
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      }
      Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) {
        Ap.col(static_cast<Eigen::Index>(j)) = A.col(idx[j]);
      }
      const Eigen::VectorXd z = Ap.colPivHouseholderQr().solve(b);

      double alpha = 1.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        const double zj = z[static_cast<Eigen::Index>(j)];
        if (zj <= 0.0) {
          const double xj = x[idx[j]];
          alpha = std::min(alpha, xj / (xj - zj));
        }
      }
      if (alpha >= 1.0) {
        x.setZero();
        for (std::size_t j = 0; j < idx.size(); ++j) {
          x[idx[j]] = z[static_cast<Eigen::Index>(j)];
        }
        break;
      }
      // Blocked: move as far as feasibility allows, drop zeroed columns.
      Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
      for (std::size_t j = 0; j < idx.size(); ++j) {
        xp[idx[j]] = z[static_cast<Eigen::Index>(j)];
      }
      x += alpha * (xp - x);
      const double xmax = x.cwiseAbs().maxCoeff();
      const double drop = 1e-12 * (xmax > 0.0 ? xmax : 1.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= drop) {
          x[j] = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    w = A.transpose() * (b - A * x);
  }
  return x;
}

}  // namespace bsloc
