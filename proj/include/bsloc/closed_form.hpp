#pragma once

#include <optional>

#include "bsloc/model.hpp"

namespace bsloc {

/// Flat stretch of optimal positions for the equal-weight, nu = 1,
/// collinear case: every point of [lo, hi] along the line attains the
/// same minimal total power.  lo == hi (unique) for an odd user count.
struct MedianResult {
  double lo = 0.0;  // scalar position along the line
  double hi = 0.0;  // scalar position, hi >= lo
  Vec lo_point;     // the same endpoints as d-dimensional points
  Vec hi_point;
  bool unique = false;
};

/// A line given by a point on it and a unit direction.
struct Line {
  Vec point;
  Vec direction;
};

struct EnclosingBall {
  Vec center;
  double radius = 0.0;
};

/// Exact optimum when every exponent is 2: sum_k (beta_k / sum beta) x_k.
/// Also optimal for height > 0 (the squared metric separates, adding the
/// constant h^2 per user).  Throws ContractError if any nu != 2, in which
/// case the caller should use solve.
Vec weighted_centroid(const ValidatedScenario& s);

/// True iff all distances from the centroid of points to the points are
/// equal within tol * diameter.
bool is_elementary_symmetric(const std::vector<Vec>& points, double tol = 1e-9);

/// Detects the common center of a union of equidistant rings: groups
/// users by distance from the global mean, then requires every ring to
/// share a single exponent and to have its own centroid at the global
/// mean (within tol * diameter).  Needs equal beta.  Returns the common
/// center on success, absent otherwise (callers fall back to solve).
/// Detection is a sufficient condition only: it can miss decompositions
/// that would need a different partition.
std::optional<Vec> symmetric_center(const ValidatedScenario& s, double tol = 1e-9);

/// Median stretch for equal-beta, nu = 1, height = 0, collinear users:
/// odd N picks the middle sorted position; even N returns the segment
/// between the two middle positions.  Scalars are parameters along the
/// detected line (for 1-D scenarios they are the coordinates themselves).
/// Throws ContractError naming the first violated hypothesis.
MedianResult collinear_median(const ValidatedScenario& s);

/// Best-fit line when the largest perpendicular residual is at most
/// tol * diameter; absent otherwise.  One or two points are always
/// collinear; a single point gets the fixed direction (1, 0, ...).  The
/// direction's first nonzero component is positive, for determinism.
std::optional<Line> detect_collinear(const std::vector<Vec>& points, double tol = 1e-9);

/// Smallest ball containing all points (dimension <= 3), computed by the
/// randomized-incremental support-set method; exact up to roundoff.  Its
/// center is the large-exponent limit of the optimal location.
EnclosingBall min_enclosing_ball(const std::vector<Vec>& points);

}  // namespace bsloc
