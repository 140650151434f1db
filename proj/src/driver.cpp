#include "bsloc/driver.hpp"

namespace bsloc {

namespace {

// Convex weights at c; when c sits exactly on a user with nu < 2 the
// weights collapse onto the co-located users, split by demand.
std::vector<double> weights_or_indicator(const Vec& c, const ValidatedScenario& s) {
  try {
    return fixed_point_weights(c, s);
  } catch (const SingularPointError& e) {
    std::vector<double> theta(s.size(), 0.0);
    double total = 0.0;
    for (int k : e.user_indices()) total += s.user(static_cast<std::size_t>(k)).beta;
    for (int k : e.user_indices())
      theta[static_cast<std::size_t>(k)] = s.user(static_cast<std::size_t>(k)).beta / total;
    return theta;
  }
}

struct ExactRoute {
  Vec c;
  SolveRoute route;
};

std::optional<ExactRoute> find_exact_route(const ValidatedScenario& s) {
  bool all_quadratic = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.user(k).nu != 2.0) {
      all_quadratic = false;
      break;
    }
  }
  if (all_quadratic) return ExactRoute{weighted_centroid(s), SolveRoute::kWeightedCentroid};
  if (std::optional<Vec> center = symmetric_center(s))
    return ExactRoute{*center, SolveRoute::kSymmetricCenter};
  try {
    MedianResult median = collinear_median(s);
    // Any point of the median interval is optimal; report its midpoint.
    return ExactRoute{0.5 * (median.lo_point + median.hi_point), SolveRoute::kMedian};
  } catch (const ContractError&) {
    // Not the equal-weight collinear nu = 1 case; no exact route applies.
  }
  return std::nullopt;
}

}  // namespace

const char* route_name(SolveRoute route) {
  switch (route) {
    case SolveRoute::kFixedPoint:
      return "fixed_point";
    case SolveRoute::kWeightedCentroid:
      return "weighted_centroid";
    case SolveRoute::kSymmetricCenter:
      return "symmetric_center";
    case SolveRoute::kMedian:
      return "median";
    case SolveRoute::kEnclosingBall:
      return "enclosing_ball";
  }
  return "fixed_point";
}

SolveReport solve_scenario(const ValidatedScenario& s, Method method,
                           const SolverOptions& options) {
  constexpr double kCertTol = 1e-8;
  SolveReport report;

  if (!s.constraints().empty()) {
    if (method == Method::kClosedForm)
      throw ContractError(
          "solve_scenario: no closed form handles ball constraints; use the projected solver");
    ConstrainedSolution sol = solve_constrained(s, options);
    report.c_star = std::move(sol.c_star);
    report.per_user_power = std::move(sol.per_user_power);
    report.total_power = sol.total_power;
    report.theta = std::move(sol.theta_extended);
    report.mu = std::move(sol.mu);
    report.iterations = sol.iterations;
    report.converged = sol.converged;
    report.constrained = true;
    report.method = SolveRoute::kFixedPoint;
    report.certificate =
        kkt_check(report.c_star, s, kCertTol, &report.per_user_power, &report.mu);
    return report;
  }

  std::optional<ExactRoute> exact;
  if (method != Method::kFixedPoint) exact = find_exact_route(s);
  if (method == Method::kClosedForm && !exact)
    throw ContractError(
        "solve_scenario: no closed-form route applies (exponents are not all 2, the user set "
        "is not symmetric, and the equal-weight collinear unit-exponent case does not hold)");

  if (exact) {
    report.c_star = std::move(exact->c);
    auto [powers, total] = power_allocation(report.c_star, s);
    report.per_user_power = std::move(powers);
    report.total_power = total;
    report.theta = weights_or_indicator(report.c_star, s);
    report.converged = true;
    report.method = exact->route;
  } else {
    Solution sol = solve(s, options);
    report.c_star = std::move(sol.c_star);
    report.per_user_power = std::move(sol.per_user_power);
    report.total_power = sol.total_power;
    report.theta = std::move(sol.theta);
    report.iterations = sol.iterations;
    report.converged = sol.converged;
    report.method = SolveRoute::kFixedPoint;
  }
  report.certificate = kkt_check(report.c_star, s, kCertTol, &report.per_user_power, nullptr);
  return report;
}

VerifyReport verify_point(const Vec& c, const ValidatedScenario& s, double tol) {
  if (c.size() != s.dimension())
    throw ContractError("verify_point: point length must equal the scenario dimension");

  VerifyReport report;
  std::vector<Vec> hull_points = s.positions();
  if (s.constraints().empty()) {
    report.kkt = kkt_check(c, s, tol);
  } else {
    // The stationarity test needs multipliers; recover them from the
    // point itself.  When recovery fails the point is not a constrained
    // optimum, and zero multipliers let the certificate say so.
    std::vector<double> mu(s.constraints().size(), 0.0);
    try {
      mu = recover_duals(c, s, s.constraints()).mu;
    } catch (const std::exception&) {
    }
    report.kkt = kkt_check(c, s, tol, nullptr, &mu);
    // Constrained optima live in the hull of users and ball centers.
    for (const Ball& ball : s.constraints()) hull_points.push_back(ball.center);
  }
  report.hull = hull_membership(c, hull_points);
  return report;
}

}  // namespace bsloc
