#pragma once

#include <optional>

#include "bsloc/solver.hpp"

namespace bsloc {

/// Solution of the ball-constrained placement problem.
struct ConstrainedSolution {
  Vec c_star;
  std::vector<double> per_user_power;
  double total_power = 0.0;
  std::vector<double> mu;         // one multiplier per ball, >= 0
  std::vector<int> active_set;    // balls with |c* - a_l| = r_l within tol
  /// Convex weights of length N + L reproducing c* over user positions
  /// followed by ball centers.
  std::vector<double> theta_extended;
  int iterations = 0;
  bool converged = false;
  /// Set when the active constraint normals are linearly dependent, in
  /// which case mu is the (approximately) minimum-norm choice.
  bool dependent_normals = false;
  double stationarity_residual = 0.0;        // relative to the gradient scale
  double complementary_slackness_max = 0.0;  // worst relative slackness
};

/// Outcome of the feasibility probe for an intersection of balls.
struct FeasibilityReport {
  std::optional<Vec> point;  // a feasible point, when one was found
  double residual = 0.0;     // smallest max-violation seen (0 when feasible)
  double min_slack = 0.0;    // min_l (r_l - |point - a_l|); > 0 means interior
};

/// Dual multipliers recovered from the stationarity equation at c_star.
struct DualRecovery {
  std::vector<double> mu;    // one per ball; zero for inactive balls
  double residual = 0.0;     // stationarity residual, relative to scale
  bool dependent_normals = false;
};

/// Searches the intersection of balls by alternating projections from
/// the mean of the centers, then pushes toward maximal slack.  Absence
/// after the iteration budget reports the best residual found and
/// signals presumed infeasibility.
FeasibilityReport check_feasible(const std::vector<Ball>& balls, int dimension);

/// Euclidean projection onto the intersection of balls, to within
/// tol * max radius (exact single-ball formula when there is one ball);
/// cyclic Dykstra iteration otherwise.  Throws InfeasibleError carrying
/// the feasibility residual when the intersection appears empty.
Vec project_onto_intersection(const Vec& c, const std::vector<Ball>& balls,
                              double tol = 1e-12);

/// Least-squares fit of the stationarity equation
///   sum_k beta_k nu_k (c - x_k) d_k^(nu_k - 2) + sum_active 2 mu_l (c - a_l) = 0
/// over mu >= 0 (inactive balls get mu = 0).  `tol` sets both the
/// relative active-set band around each radius and the acceptance
/// threshold on the relative stationarity residual; residuals above it
/// throw DualRecoveryError (the point is not optimal).
DualRecovery recover_duals(const Vec& c_star, const ValidatedScenario& s,
                           const std::vector<Ball>& balls, double tol = 1e-7);

/// Minimizes total power over the intersection of the scenario's balls:
/// safeguarded fixed-point / gradient steps projected back onto the
/// intersection, accepted on strict objective decrease.  On termination
/// recovers duals, the extended convex weights, and the least-power
/// allocation.
ConstrainedSolution solve_constrained(const ValidatedScenario& s,
                                      const SolverOptions& options = {});

}  // namespace bsloc
