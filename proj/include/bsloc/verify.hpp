#pragma once

#include <optional>

#include "bsloc/solver.hpp"

namespace bsloc {

/// Outcome of the nonsmooth optimality test at a user point.
struct SubgradientCase {
  int user_index = -1;
  bool optimal = false;
};

/// First-order optimality certificate for a candidate location.
struct KktReport {
  /// |stationarity sum| relative to the gradient scale; at a nonsmooth
  /// user point, the relative excess over the subgradient bound.
  double stationarity_residual = 0.0;
  std::vector<double> lambda;  // per-user power duals, identically 1
  /// Worst relative complementary-slackness violation: supplied powers
  /// against |P_k - beta_k d_k^nu| / total power, and supplied
  /// multipliers against ||c - a_l| - r_l| / r_l where mu_l > 0.
  double complementary_slackness_max = 0.0;
  bool primal_feasibility_ok = true;
  std::optional<SubgradientCase> subgradient_case;
  bool passed = false;
};

/// Convex-combination certificate: c = sum q_k x_k with q on the simplex.
struct HullCertificate {
  bool member = false;
  std::vector<double> coefficients;  // >= 0; sum to 1 when member
  double residual = 0.0;             // |sum q_k x_k - c|
};

struct GridResult {
  Vec point;
  double value = 0.0;
};

/// Checks the first-order optimality system at c: stationarity with the
/// power duals pinned at 1, least-power complementary slackness (against
/// `powers` when supplied), and primal feasibility.  Supplying `mu` adds
/// the ball-constraint terms 2 mu_l (c - a_l) to the stationarity sum
/// and checks mu_l >= 0 plus constraint slackness.  When c sits exactly
/// on a nu = 1 user (height 0), the nonsmooth test replaces the
/// vanishing-gradient requirement and is reported in subgradient_case.
KktReport kkt_check(const Vec& c, const ValidatedScenario& s, double tol = 1e-8,
                    const std::vector<double>* powers = nullptr,
                    const std::vector<double>* mu = nullptr);

/// Least-squares feasibility test for c in the convex hull of points:
/// minimizes |sum q_k x_k - c| over the simplex (small dense problem).
/// member iff the attained residual is at most tol * diameter.
HullCertificate hull_membership(const Vec& c, const std::vector<Vec>& points,
                                double tol = 1e-9);

/// Exhaustive objective scan over a uniform grid on the users' bounding
/// box padded by 1% of the diameter; the returned point is the best grid
/// node (first hit wins ties, scanning in index order).  Grid nodes
/// violating the scenario's ball constraints are skipped.  Refuses more
/// than 1e9 evaluations or more than 2000 nodes per axis.
GridResult grid_oracle(const ValidatedScenario& s, int resolution);

}  // namespace bsloc
