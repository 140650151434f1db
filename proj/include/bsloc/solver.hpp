#pragma once

#include <optional>

#include "bsloc/model.hpp"

namespace bsloc {

struct SolverOptions {
  double tol_grad = 1e-10;   // relative stationarity tolerance
  double tol_step = 1e-13;   // relative step-stagnation tolerance
  int max_iters = 10000;
  std::optional<Vec> initial_point;  // default: beta-weighted mean
  double damping_min = 1e-6;         // smallest interpolation factor
};

struct Solution {
  Vec c_star;
  std::vector<double> per_user_power;  // P_k = beta_k * dist_k^nu_k
  double total_power = 0.0;
  std::vector<double> theta;  // convex weights, sum to 1
  int iterations = 0;
  bool converged = false;
  bool unique = false;  // some nu_k > 1, or elevated
  /// Objective value at each accepted iterate (strictly decreasing).
  std::vector<double> trace;
  /// Set when the optimum sits on a user point with a nu = 1 term and was
  /// certified by the subgradient test instead of a vanishing gradient.
  std::optional<int> singular_vertex;
  /// Diagnostics at c_star: |grad| / scale and |T(c) - c| / length scale.
  double stationarity_residual = 0.0;
  double fixed_point_residual = 0.0;
};

/// Total transmit power at location c: sum_k beta_k * dist_k(c)^nu_k.
double objective(const Vec& c, const ValidatedScenario& s);

/// Gradient sum_k beta_k nu_k (c - x_k) dist_k^(nu_k - 2).  A term with
/// c = x_k and nu_k >= 2 contributes the zero vector (the limit
/// convention for nu = 2, the true value above).  Throws
/// SingularPointError carrying the offending indices when h = 0 and c
/// sits exactly on a user with nu < 2; for nu = 1 use subgradient_test.
Vec gradient(const Vec& c, const ValidatedScenario& s);

/// Users that make the objective non-differentiable at c: exactly
/// co-located, nu = 1, height = 0.  Empty for elevated scenarios.
std::vector<int> nonsmooth_users(const Vec& c, const ValidatedScenario& s);

/// Sum of the differentiable terms' gradients at c, with every exactly
/// co-located term taken at its calculus limit (zero for nu > 1).
/// Unlike gradient, never throws: at a nonsmooth_users point this is the
/// smooth part g of the subgradient bound |g| <= B.
Vec stationarity_sum(const Vec& c, const ValidatedScenario& s);

/// Fixed-point weights theta_k proportional to beta_k nu_k dist_k^(nu_k-2),
/// normalized to sum to 1.  Computed in log space so large exponents do
/// not overflow.  Throws SingularPointError when some dist_k = 0 with
/// nu_k < 2 (infinite weight).
std::vector<double> fixed_point_weights(const Vec& c, const ValidatedScenario& s);

/// Optimality test at user point x_j when the objective is not
/// differentiable there (some user co-located at x_j has nu = 1, h = 0).
/// Returns true iff |g| <= B where g is the gradient of the smooth terms
/// (users at other positions) and B is the total beta of co-located nu=1
/// users.  Throws ContractError when no nu = 1 user sits at x_j.
bool subgradient_test(std::size_t j, const ValidatedScenario& s);

/// Least-power allocation at c: P_k = beta_k dist_k^nu_k and their sum.
std::pair<std::vector<double>, double> power_allocation(const Vec& c, const ValidatedScenario& s);

/// Gradient magnitude scale sum_k beta_k nu_k D^(nu_k - 1) with
/// D = diameter + height, used for relative stationarity tolerances.
double stationarity_scale(const ValidatedScenario& s);

/// Minimizes the total power over the transmitter location by the
/// safeguarded fixed-point iteration c <- sum_k theta_k(c) x_k: candidate
/// steps are accepted only on strict objective decrease, with halving
/// toward the current iterate and a backtracking gradient-descent
/// fallback.  Iterates landing on a user point with a nu = 1 term are
/// resolved by subgradient_test (stop there, or restart displaced along
/// the negative gradient).  Scenarios with location constraints belong to
/// solve_constrained.
Solution solve(const ValidatedScenario& s, const SolverOptions& options = {});

}  // namespace bsloc
