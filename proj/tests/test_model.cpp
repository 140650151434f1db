#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace bsloc;
using namespace bsloc_test;

TEST_CASE("beta_from_link basic identities") {
  LinkBudget b;
  b.rate_bps = 1e6;
  b.bandwidth_hz = 1e6;
  b.snr_gap = 1.0;
  b.noise_w = 1.0;
  b.alpha = 1.0;
  CHECK(beta_from_link(b) == doctest::Approx(1.0).epsilon(1e-15));  // 2^1 - 1 = 1

  b.rate_bps = 1e-3;  // vanishing demand -> vanishing beta
  const double tiny = beta_from_link(b);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-8);
}

TEST_CASE("beta_from_link worked example") {
  // rate = 2 * bandwidth, gap 2, noise 1e-13 W, free-space alpha at 0.125 m.
  LinkBudget b;
  b.rate_bps = 2e6;
  b.bandwidth_hz = 1e6;
  b.snr_gap = 2.0;
  b.noise_w = 1e-13;
  b.alpha = alpha_free_space(0.125);
  CHECK(b.alpha == doctest::Approx(9.89464684007205e-05).epsilon(1e-12));
  CHECK(beta_from_link(b) == doctest::Approx(6.0638849440293014e-09).epsilon(1e-12));
}

TEST_CASE("beta_from_link monotonicity") {
  LinkBudget b;
  b.rate_bps = 2e6;
  b.bandwidth_hz = 1e6;
  b.snr_gap = 1.5;
  b.noise_w = 1e-12;
  b.alpha = 3.0;
  const double base = beta_from_link(b);

  LinkBudget t = b;
  t.rate_bps *= 1.5;
  CHECK(beta_from_link(t) > base);  // increasing in rate
  t = b;
  t.snr_gap *= 2.0;
  CHECK(beta_from_link(t) > base);  // increasing in the gap
  t = b;
  t.noise_w *= 2.0;
  CHECK(beta_from_link(t) > base);  // increasing in noise
  t = b;
  t.alpha *= 2.0;
  CHECK(beta_from_link(t) < base);  // decreasing in alpha
  t = b;
  t.bandwidth_hz *= 2.0;
  CHECK(beta_from_link(t) < base);  // decreasing in bandwidth at fixed rate
}

TEST_CASE("beta_from_link rejects bad fields and overflow") {
  LinkBudget b;
  b.rate_bps = 1e6;
  b.bandwidth_hz = 1e6;
  b.snr_gap = 1.0;
  b.noise_w = 1e-12;
  b.alpha = 1.0;

  LinkBudget t = b;
  t.snr_gap = 0.5;
  CHECK_THROWS_AS(beta_from_link(t), ValidationError);
  t = b;
  t.noise_w = 0.0;
  CHECK_THROWS_AS(beta_from_link(t), ValidationError);
  t = b;
  t.rate_bps = 5000e6;  // 2^5000 overflows
  t.bandwidth_hz = 1e6;
  CHECK_THROWS_AS(beta_from_link(t), ValidationError);
}

TEST_CASE("propagation constants") {
  CHECK(alpha_free_space(4.0 * M_PI) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(alpha_free_space(0.125) == doctest::Approx(9.89464684007205e-05).epsilon(1e-12));
  CHECK_THROWS_AS(alpha_free_space(0.0), ValidationError);

  CHECK(alpha_two_ray(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(alpha_two_ray(30.0, 1.5) == doctest::Approx(2025.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_two_ray(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(alpha_two_ray(1.0, -2.0), ValidationError);
}

TEST_CASE("validate accepts a minimal scenario") {
  Scenario s;
  s.dimension = 2;
  s.users.push_back(user(vec2(0.0, 0.0)));
  const ValidatedScenario v = validate(std::move(s));
  CHECK(v.size() == 1);
  CHECK(v.diameter() == 0.0);
  CHECK(v.length_scale() == 1.0);  // floored for single-point sets
}

TEST_CASE("validate collects violations with indices") {
  Scenario s;
  s.dimension = 2;
  s.users.push_back(user(vec3(0.0, 0.0, 0.0)));      // wrong length
  s.users.push_back(user(vec2(1.0, 0.0), 1.0, 0.5));  // exponent below 1
  s.users.push_back(user(vec2(2.0, 0.0), -1.0));      // nonpositive beta
  try {
    validate(std::move(s));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 3);
    CHECK(e.violations()[0].field == "users.position");
    CHECK(e.violations()[0].index == 0);
    CHECK(e.violations()[1].field == "users.nu");
    CHECK(e.violations()[1].index == 1);
    CHECK(e.violations()[2].field == "users.beta");
    CHECK(e.violations()[2].index == 2);
  }
}

TEST_CASE("validate rejects empty scenarios, bad balls, elevated 3-D") {
  Scenario s;
  s.dimension = 2;
  CHECK_THROWS_AS(validate(s), ValidationError);  // no users

  s.users.push_back(user(vec2(0.0, 0.0)));
  s.constraints.push_back({vec2(0.0, 0.0), 0.0});  // zero radius
  CHECK_THROWS_AS(validate(s), ValidationError);
  s.constraints.clear();

  Scenario e;
  e.dimension = 3;
  e.height = 5.0;  // elevated transmitter needs users on a line or plane
  e.users.push_back(user(vec3(0.0, 0.0, 0.0)));
  CHECK_THROWS_AS(validate(e), ValidationError);
}

TEST_CASE("distances use the elevated metric") {
  Scenario s;
  s.dimension = 1;
  s.height = 3.0;
  s.users.push_back(user(vec1(0.0)));
  s.users.push_back(user(vec1(4.0)));
  const ValidatedScenario v = validate(std::move(s));
  CHECK(v.elevated());
  CHECK(v.distance(vec1(4.0), 0) == doctest::Approx(5.0));  // sqrt(16 + 9)
  CHECK(v.distance(vec1(4.0), 1) == doctest::Approx(3.0));  // directly above
  CHECK(v.diameter() == doctest::Approx(4.0));
  CHECK(v.metric_diameter() == doctest::Approx(7.0));
}
