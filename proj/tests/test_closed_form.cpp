#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"

using namespace bsloc;
using namespace bsloc_test;

namespace {

// Regular n-gon of circumradius r around (cx, cy), rotated by phase.
std::vector<Vec> polygon(int n, double r, double cx, double cy, double phase = 0.0) {
  std::vector<Vec> out;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * M_PI * i / n;
    out.push_back(vec2(cx + r * std::cos(a), cy + r * std::sin(a)));
  }
  return out;
}

ValidatedScenario scenario_of(const std::vector<Vec>& points, double nu) {
  Scenario s;
  s.dimension = static_cast<int>(points.front().size());
  for (const Vec& p : points) s.users.push_back(user(p, 1.0, nu));
  return validate(std::move(s));
}

// Exhaustive smallest-ball oracle for small 2-D sets: try every pair
// midpoint and every triple circumcenter, keep the smallest candidate
// that contains all points.  Independent of the production algorithm.
double brute_force_radius(const std::vector<Vec>& pts) {
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& center) {
    double r = 0.0;
    for (const Vec& p : pts) r = std::max(r, (p - center).norm());
    best = std::min(best, r);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    consider(pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      consider(0.5 * (pts[i] + pts[j]));
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        // Circumcenter via the perpendicular-bisector linear system.
        Eigen::Matrix2d A;
        Eigen::Vector2d b;
        A.row(0) = (pts[j] - pts[i]).transpose();
        A.row(1) = (pts[k] - pts[i]).transpose();
        b[0] = 0.5 * (pts[j].squaredNorm() - pts[i].squaredNorm());
        b[1] = 0.5 * (pts[k].squaredNorm() - pts[i].squaredNorm());
        if (std::abs(A.determinant()) < 1e-12) continue;  // collinear triple
        consider(A.colPivHouseholderQr().solve(b));
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("weighted_centroid") {
  Scenario s;
  s.dimension = 2;
  s.users.push_back(user(vec2(0.0, 0.0), 1.0, 2.0));
  s.users.push_back(user(vec2(2.0, 0.0), 3.0, 2.0));
  const Vec c = weighted_centroid(validate(s));
  CHECK(c[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(c[1] == 0.0);

  // Equal weights: plain mean.
  const ValidatedScenario mean4 = line_scenario({0.0, 1.0, 2.0, 10.0}, 2.0);
  CHECK(weighted_centroid(mean4)[0] == doctest::Approx(3.25).epsilon(1e-15));

  // A dominant weight pulls the centroid onto that user.
  s.users[0].beta = 1.0;
  s.users[1].beta = 1e-12;
  CHECK(weighted_centroid(validate(s))[0] <= 1e-11);

  s.users[1].nu = 3.0;  // not a free-space scenario anymore
  CHECK_THROWS_AS(weighted_centroid(validate(s)), ContractError);
}

TEST_CASE("is_elementary_symmetric") {
  CHECK(is_elementary_symmetric(polygon(5, 2.0, 3.0, -1.0, 0.4)));
  CHECK(is_elementary_symmetric({vec2(0.0, 0.0), vec2(5.0, 1.0)}));  // any two points
  CHECK_FALSE(is_elementary_symmetric({vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 3.0)}));
}

TEST_CASE("symmetric_center finds concentric rings") {
  // Two concentric polygons, arbitrary rotations, one exponent per ring.
  std::vector<Vec> pts = polygon(5, 1.0, 2.0, 1.0, 0.3);
  const std::vector<Vec> outer = polygon(8, 3.0, 2.0, 1.0, 1.1);
  pts.insert(pts.end(), outer.begin(), outer.end());
  Scenario s;
  s.dimension = 2;
  for (std::size_t i = 0; i < pts.size(); ++i)
    s.users.push_back(user(pts[i], 1.0, i < 5 ? 3.0 : 1.5));
  const auto center = symmetric_center(validate(s));
  REQUIRE(center.has_value());
  CHECK(((*center) - vec2(2.0, 1.0)).norm() <= 1e-9 * 6.0);

  // A center-point user forms its own radius-zero ring.
  Scenario square;
  square.dimension = 2;
  for (const Vec& p : polygon(4, std::sqrt(2.0), 1.0, 1.0, M_PI / 4.0))
    square.users.push_back(user(p, 1.0, 3.0));
  square.users.push_back(user(vec2(1.0, 1.0), 1.0, 2.0));
  const auto with_hub = symmetric_center(validate(square));
  REQUIRE(with_hub.has_value());
  CHECK(((*with_hub) - vec2(1.0, 1.0)).norm() <= 1e-9 * 4.0);

  // Unequal beta breaks the hypothesis.
  square.users[0].beta = 2.0;
  CHECK_FALSE(symmetric_center(validate(square)).has_value());

  // Mixed exponents inside one ring break it too.
  Scenario mixed;
  mixed.dimension = 2;
  const std::vector<Vec> ring = polygon(4, 1.0, 0.0, 0.0);
  for (std::size_t i = 0; i < ring.size(); ++i)
    mixed.users.push_back(user(ring[i], 1.0, i == 0 ? 2.0 : 3.0));
  CHECK_FALSE(symmetric_center(validate(mixed)).has_value());

  // Shifted rings (different centers) must be rejected.
  std::vector<Vec> off = polygon(4, 1.0, 0.0, 0.0);
  const std::vector<Vec> far = polygon(4, 2.0, 0.7, 0.0);
  off.insert(off.end(), far.begin(), far.end());
  CHECK_FALSE(symmetric_center(scenario_of(off, 3.0)).has_value());
}

TEST_CASE("collinear_median odd, even, and single") {
  const MedianResult odd = collinear_median(line_scenario({2.0, 0.0, 1.0}, 1.0));
  CHECK(odd.unique);
  CHECK(odd.lo == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(odd.hi == doctest::Approx(1.0).epsilon(1e-15));

  const ValidatedScenario even = line_scenario({0.0, 1.0, 2.0, 10.0}, 1.0);
  const MedianResult interval = collinear_median(even);
  CHECK_FALSE(interval.unique);
  CHECK(interval.lo == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interval.hi == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(interval.lo_point[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interval.hi_point[0] == doctest::Approx(2.0).epsilon(1e-15));

  // Every point of the interval attains the same objective; outside is worse.
  const double at_lo = objective(interval.lo_point, even);
  const double at_hi = objective(interval.hi_point, even);
  const double at_mid = objective(0.5 * (interval.lo_point + interval.hi_point), even);
  CHECK(std::abs(at_lo - at_hi) <= 1e-12 * at_lo);
  CHECK(std::abs(at_lo - at_mid) <= 1e-12 * at_lo);
  CHECK(objective(vec1(interval.lo - 0.1), even) > at_lo);
  CHECK(objective(vec1(interval.hi + 0.1), even) > at_hi);

  const MedianResult single = collinear_median(line_scenario({5.0}, 1.0));
  CHECK(single.unique);
  CHECK(single.lo == 5.0);
}

TEST_CASE("collinear_median on a slanted 2-D line") {
  Scenario s;
  s.dimension = 2;
  for (double t : {0.0, 1.0, 4.0}) s.users.push_back(user(vec2(t, 2.0 * t), 1.0, 1.0));
  const MedianResult m = collinear_median(validate(std::move(s)));
  CHECK(m.unique);
  CHECK((m.lo_point - vec2(1.0, 2.0)).norm() <= 1e-12);
}

TEST_CASE("collinear_median names the violated hypothesis") {
  CHECK_THROWS_AS(collinear_median(line_scenario({0.0, 1.0, 2.0}, 2.0)), ContractError);

  Scenario unequal;
  unequal.dimension = 1;
  unequal.users.push_back(user(vec1(0.0), 1.0, 1.0));
  unequal.users.push_back(user(vec1(1.0), 2.0, 1.0));
  CHECK_THROWS_AS(collinear_median(validate(std::move(unequal))), ContractError);

  CHECK_THROWS_AS(collinear_median(line_scenario({0.0, 1.0, 2.0}, 1.0, 1.0, 3.0)),
                  ContractError);  // elevated

  Scenario planar;
  planar.dimension = 2;
  planar.users.push_back(user(vec2(0.0, 0.0), 1.0, 1.0));
  planar.users.push_back(user(vec2(1.0, 0.0), 1.0, 1.0));
  planar.users.push_back(user(vec2(0.0, 1.0), 1.0, 1.0));
  CHECK_THROWS_AS(collinear_median(validate(std::move(planar))), ContractError);
}

TEST_CASE("detect_collinear") {
  const auto diag = detect_collinear({vec2(0.0, 0.0), vec2(1.0, 1.0), vec2(2.0, 2.0)});
  REQUIRE(diag.has_value());
  CHECK(std::abs(diag->direction[0] - 1.0 / std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(diag->direction[1] - 1.0 / std::sqrt(2.0)) <= 1e-12);
  // The anchor point lies on the line y = x.
  CHECK(std::abs(diag->point[0] - diag->point[1]) <= 1e-12);

  CHECK_FALSE(detect_collinear({vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0)}).has_value());

  const auto lone = detect_collinear({vec2(3.0, 4.0)});
  REQUIRE(lone.has_value());
  CHECK(lone->direction[0] == 1.0);
  CHECK(lone->direction[1] == 0.0);
}

TEST_CASE("min_enclosing_ball reference geometries") {
  const auto pair = min_enclosing_ball({vec2(0.0, 0.0), vec2(2.0, 0.0)});
  CHECK((pair.center - vec2(1.0, 0.0)).norm() <= 1e-12);
  CHECK(pair.radius == doctest::Approx(1.0).epsilon(1e-12));

  const auto line = min_enclosing_ball({vec1(0.0), vec1(1.0), vec1(2.0), vec1(10.0)});
  CHECK(std::abs(line.center[0] - 5.0) <= 1e-9);
  CHECK(std::abs(line.radius - 5.0) <= 1e-9);

  const auto tri = min_enclosing_ball(
      {vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.5, std::sqrt(3.0) / 2.0)});
  CHECK(std::abs(tri.radius - 1.0 / std::sqrt(3.0)) <= 1e-12);
  CHECK((tri.center - vec2(0.5, std::sqrt(3.0) / 6.0)).norm() <= 1e-12);

  const auto one = min_enclosing_ball({vec3(1.0, 2.0, 3.0)});
  CHECK(one.radius == 0.0);
}

TEST_CASE("min_enclosing_ball matches the exhaustive oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Vec> pts;
    const int n = 2 + static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) pts.push_back(vec2(coord(rng), coord(rng)));
    if (trial % 4 == 0) pts.push_back(pts.front());  // duplicates allowed
    const auto ball = min_enclosing_ball(pts);
    const double oracle = brute_force_radius(pts);
    double diameter = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        diameter = std::max(diameter, (pts[i] - pts[j]).norm());
    CHECK(std::abs(ball.radius - oracle) <= 1e-9 * std::max(diameter, 1.0));
    for (const Vec& p : pts)  // containment is exact by construction
      CHECK((p - ball.center).norm() <= ball.radius * (1.0 + 1e-12) + 1e-300);
  }
}

TEST_CASE("min_enclosing_ball boundary structure") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::vector<Vec> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(vec2(coord(rng), coord(rng)));
  const auto ball = min_enclosing_ball(pts);

  std::vector<Vec> boundary;
  for (const Vec& p : pts)
    if ((p - ball.center).norm() >= ball.radius * (1.0 - 1e-9)) boundary.push_back(p);
  CHECK(boundary.size() >= 2);  // at least two support points when N >= 2

  // Dropping every interior point must not change the ball.
  const auto reduced = min_enclosing_ball(boundary);
  CHECK((reduced.center - ball.center).norm() <= 1e-9 * ball.radius);
  CHECK(std::abs(reduced.radius - ball.radius) <= 1e-9 * ball.radius);

  CHECK_THROWS_AS(min_enclosing_ball({Vec(Vec::Zero(4))}), ContractError);
}
