#pragma once

#include "bsloc/closed_form.hpp"
#include "bsloc/constrained.hpp"
#include "bsloc/verify.hpp"

namespace bsloc {

/// Route selection for solve_scenario.
enum class Method {
  kAuto,        // exact routes first, fixed-point iteration as fallback
  kFixedPoint,  // force the iterative solver
  kClosedForm,  // require an exact route; error when none applies
};

/// Which route produced the reported answer.
enum class SolveRoute {
  kFixedPoint,
  kWeightedCentroid,
  kSymmetricCenter,
  kMedian,
  kEnclosingBall,
};

const char* route_name(SolveRoute route);

/// A solved scenario bundled with its optimality certificate.
struct SolveReport {
  Vec c_star;
  std::vector<double> per_user_power;
  double total_power = 0.0;
  /// Convex weights over user positions; for constrained scenarios the
  /// extended weights over users followed by ball centers.
  std::vector<double> theta;
  std::vector<double> mu;  // empty when the scenario has no constraints
  int iterations = 0;
  bool converged = false;
  bool constrained = false;
  SolveRoute method = SolveRoute::kFixedPoint;
  KktReport certificate;
};

/// Solves a scenario end to end.  kAuto picks exact routes in a fixed
/// documented order — every exponent 2 (weighted centroid), symmetric
/// rings (common center), equal-weight collinear nu = 1 (median
/// midpoint) — and otherwise runs the safeguarded fixed-point solver.
/// Ball-constrained scenarios always use the projected solver.  The
/// certificate is evaluated at tolerance 1e-8.
SolveReport solve_scenario(const ValidatedScenario& s, Method method = Method::kAuto,
                           const SolverOptions& options = {});

/// Full optimality certificate for an externally supplied point: the
/// first-order system plus hull membership.  For constrained scenarios
/// the multipliers are recovered from the point (zeros when recovery
/// fails, which makes the certificate report non-optimality) and the
/// hull is taken over user positions and ball centers.
struct VerifyReport {
  KktReport kkt;
  HullCertificate hull;
};

VerifyReport verify_point(const Vec& c, const ValidatedScenario& s, double tol = 1e-8);

}  // namespace bsloc
