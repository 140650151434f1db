#pragma once

#include <Eigen/Dense>

namespace bsloc {

/// Lawson-Hanson active-set solution of min |A x - b|^2 subject to
/// x >= 0.  Intended for the small dense systems this library needs
/// (a handful of rows and columns).  `tol` < 0 picks a scale-aware
/// default for the optimality test on the dual vector A^T (b - A x).
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     double tol = -1.0);

}  // namespace bsloc
