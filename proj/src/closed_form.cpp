#include "bsloc/closed_form.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace bsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_points(const std::vector<Vec>& pts, const char* where) {
  if (pts.empty()) {
    throw ContractError(std::string(where) + ": needs at least one point");
  }
  for (const Vec& p : pts) {
    if (p.size() != pts.front().size()) {
      throw ContractError(std::string(where) + ": points have mixed dimensions");
    }
    if (!p.allFinite()) {
      throw ContractError(std::string(where) + ": points must be finite");
    }
  }
}

double point_diameter(const std::vector<Vec>& pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
    }
  }
  return std::sqrt(d2);
}

Vec mean_of(const std::vector<Vec>& pts) {
  Vec m = Vec::Zero(pts.front().size());
  for (const Vec& p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

// Fix the sign so the first nonzero component is positive; keeps the
// reported direction deterministic across eigensolver conventions.
void canonicalize_direction(Vec& dir) {
  for (Eigen::Index i = 0; i < dir.size(); ++i) {
    if (dir[i] != 0.0) {
      if (dir[i] < 0.0) dir = -dir;
      return;
    }
  }
}

// Smallest sphere passing through all points of S (1 <= |S| <= 4): in
// the frame of S[0] the equidistance conditions are linear, and the
// minimum-norm solution gives the smallest such sphere even when the
// points are affinely dependent.
EnclosingBall sphere_through(const std::vector<const Vec*>& S) {
  const Vec& p0 = *S.front();
  EnclosingBall ball;
  ball.center = p0;
  if (S.size() > 1) {
    Eigen::MatrixXd A(S.size() - 1, p0.size());
    Eigen::VectorXd rhs(S.size() - 1);
    for (std::size_t i = 1; i < S.size(); ++i) {
      const Vec v = *S[i] - p0;
      A.row(static_cast<Eigen::Index>(i - 1)) = v.transpose();
      rhs(static_cast<Eigen::Index>(i - 1)) = 0.5 * v.squaredNorm();
    }
    ball.center += A.completeOrthogonalDecomposition().solve(rhs);
  }
  double r = 0.0;
  for (const Vec* p : S) r = std::max(r, (*p - ball.center).norm());
  ball.radius = r;
  return ball;
}

// Smallest ball containing the support points (|S| <= d+1 <= 4).  Tries
// every nonempty subset's circumsphere and keeps the smallest one that
// covers the whole support, which stays correct for collinear or
// duplicated supports where the full circumsphere system is singular.
EnclosingBall ball_of_support(const std::vector<const Vec*>& S, Eigen::Index dim,
                              double eps) {
  if (S.empty()) {
    EnclosingBall empty;
    empty.center = Vec::Zero(dim);
    empty.radius = -1.0;  // contains nothing
    return empty;
  }
  EnclosingBall best;
  best.radius = kInf;
  std::vector<const Vec*> subset;
  const unsigned full = 1u << S.size();
  for (unsigned mask = 1; mask < full; ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < S.size(); ++i) {
      if (mask & (1u << i)) subset.push_back(S[i]);
    }
    EnclosingBall b = sphere_through(subset);
    if (b.radius >= best.radius) continue;
    bool covers = true;
    for (const Vec* p : S) {
      if ((*p - b.center).norm() > b.radius + eps) {
        covers = false;
        break;
      }
    }
    if (covers) best = b;
  }
  return best;
}

EnclosingBall welzl(std::vector<const Vec*>& pts, std::size_t n,
                    std::vector<const Vec*>& support, Eigen::Index dim,
                    std::size_t cap, double eps) {
  if (n == 0 || support.size() == cap) return ball_of_support(support, dim, eps);
  EnclosingBall b = welzl(pts, n - 1, support, dim, cap, eps);
  const Vec& p = *pts[n - 1];
  if (b.radius >= 0.0 && (p - b.center).norm() <= b.radius + eps) return b;
  support.push_back(pts[n - 1]);
  b = welzl(pts, n - 1, support, dim, cap, eps);
  support.pop_back();
  return b;
}

}  // namespace

Vec weighted_centroid(const ValidatedScenario& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.user(k).nu != 2.0) {
      throw ContractError("weighted_centroid: user " + std::to_string(k) +
                          " has exponent " + std::to_string(s.user(k).nu) +
                          "; the closed form needs every exponent equal to 2 — use solve");
    }
  }
  Vec c = Vec::Zero(s.dimension());
  double mass = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    c += s.user(k).beta * s.user(k).position;
    mass += s.user(k).beta;
  }
  return c / mass;
}

bool is_elementary_symmetric(const std::vector<Vec>& points, double tol) {
  check_points(points, "is_elementary_symmetric");
  const Vec m = mean_of(points);
  double lo = kInf;
  double hi = 0.0;
  for (const Vec& p : points) {
    const double r = (p - m).norm();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo <= tol * point_diameter(points);
}

std::optional<Vec> symmetric_center(const ValidatedScenario& s, double tol) {
  const double beta0 = s.user(0).beta;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s.user(k).beta != beta0) return std::nullopt;
  }
  const std::vector<Vec> pts = s.positions();
  const Vec m = mean_of(pts);
  const double band = tol * s.diameter();

  std::vector<std::pair<double, std::size_t>> by_r(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) by_r[k] = {(pts[k] - m).norm(), k};
  std::sort(by_r.begin(), by_r.end());

  std::size_t i = 0;
  while (i < by_r.size()) {
    // One ring: users whose centroid distance matches the anchor's.
    std::size_t j = i;
    while (j + 1 < by_r.size() && by_r[j + 1].first - by_r[i].first <= band) ++j;
    Vec ring_mean = Vec::Zero(s.dimension());
    const double nu0 = s.user(by_r[i].second).nu;
    for (std::size_t t = i; t <= j; ++t) {
      if (s.user(by_r[t].second).nu != nu0) return std::nullopt;
      ring_mean += pts[by_r[t].second];
    }
    ring_mean /= static_cast<double>(j - i + 1);
    if ((ring_mean - m).norm() > band) return std::nullopt;
    i = j + 1;
  }
  return m;
}

MedianResult collinear_median(const ValidatedScenario& s) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.user(k).nu != 1.0) {
      throw ContractError("collinear_median: user " + std::to_string(k) +
                          " has exponent " + std::to_string(s.user(k).nu) +
                          "; the median form needs nu = 1 for every user");
    }
  }
  const double beta0 = s.user(0).beta;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s.user(k).beta != beta0) {
      throw ContractError("collinear_median: user " + std::to_string(k) +
                          " has a different beta; the median form needs equal weights");
    }
  }
  if (s.elevated()) {
    throw ContractError(
        "collinear_median: needs height = 0; the lifted metric is strictly "
        "convex with a single minimizer — use solve");
  }
  const std::vector<Vec> pts = s.positions();
  Line line;
  if (s.dimension() == 1) {
    // Parameters along a 1-D line are the coordinates themselves.
    line.point = Vec::Zero(1);
    line.direction = Vec::Ones(1);
  } else {
    std::optional<Line> fit = detect_collinear(pts, 1e-9);
    if (!fit) {
      throw ContractError("collinear_median: users are not collinear");
    }
    line = std::move(*fit);
  }

  std::vector<std::pair<double, std::size_t>> t(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    t[k] = {line.direction.dot(pts[k] - line.point), k};
  }
  std::sort(t.begin(), t.end());

  MedianResult res;
  const std::size_t n = t.size();
  if (n % 2 == 1) {
    res.lo = res.hi = t[n / 2].first;
    res.lo_point = res.hi_point = pts[t[n / 2].second];
  } else {
    res.lo = t[n / 2 - 1].first;
    res.hi = t[n / 2].first;
    res.lo_point = pts[t[n / 2 - 1].second];
    res.hi_point = pts[t[n / 2].second];
  }
  res.unique = res.lo == res.hi;
  return res;
}

std::optional<Line> detect_collinear(const std::vector<Vec>& points, double tol) {
  check_points(points, "detect_collinear");
  const Eigen::Index dim = points.front().size();
  Line line;
  line.point = mean_of(points);
  const double D = point_diameter(points);
  if (points.size() == 1 || D == 0.0) {
    line.point = points.front();
    line.direction = Vec::Zero(dim);
    line.direction[0] = 1.0;  // fixed convention for a degenerate set
    return line;
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const Vec& p : points) {
    const Vec v = p - line.point;
    cov += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Vec dir = es.eigenvectors().col(dim - 1);  // principal direction
  dir.normalize();
  canonicalize_direction(dir);
  line.direction = dir;
  for (const Vec& p : points) {
    const Vec v = p - line.point;
    const double residual = (v - v.dot(dir) * dir).norm();
    if (residual > tol * D) return std::nullopt;
  }
  return line;
}

EnclosingBall min_enclosing_ball(const std::vector<Vec>& points) {
  check_points(points, "min_enclosing_ball");
  const Eigen::Index dim = points.front().size();
  if (dim > 3) {
    throw ContractError("min_enclosing_ball: supports dimension <= 3, got " +
                        std::to_string(dim));
  }
  const double D = point_diameter(points);
  const double eps = 1e-12 * (D > 0.0 ? D : 1.0);

  std::vector<const Vec*> pts;
  pts.reserve(points.size());
  for (const Vec& p : points) pts.push_back(&p);
  // Fixed-seed Fisher-Yates shuffle: expected-linear run time with a
  // deterministic result across runs and platforms.
  std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
  for (std::size_t i = pts.size(); i > 1; --i) {
    std::swap(pts[i - 1], pts[gen() % i]);
  }

  std::vector<const Vec*> support;
  support.reserve(static_cast<std::size_t>(dim) + 2);
  EnclosingBall ball =
      welzl(pts, pts.size(), support, dim, static_cast<std::size_t>(dim) + 1, eps);
  // Report the radius that exactly covers the farthest point, so the
  // containment invariant holds without any tolerance slack.
  double r = 0.0;
  for (const Vec& p : points) r = std::max(r, (p - ball.center).norm());
  ball.radius = r;
  return ball;
}

}  // namespace bsloc
