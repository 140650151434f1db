#pragma once

#include <random>
#include <vector>

#include "bsloc/driver.hpp"

namespace bsloc_test {

using bsloc::Scenario;
using bsloc::UserSpec;
using bsloc::ValidatedScenario;
using bsloc::Vec;

inline Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec vec3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

inline UserSpec user(Vec position, double beta = 1.0, double nu = 2.0) {
  UserSpec u;
  u.position = std::move(position);
  u.beta = beta;
  u.nu = nu;
  return u;
}

/// Equal-beta users on the x axis, one common exponent.
inline ValidatedScenario line_scenario(const std::vector<double>& xs, double nu,
                                       double beta = 1.0, double height = 0.0) {
  Scenario s;
  s.dimension = 1;
  s.height = height;
  for (double x : xs) s.users.push_back(user(vec1(x), beta, nu));
  return bsloc::validate(std::move(s));
}

/// Uniform-random users in [-10, 10]^dim with exponents in [nu_lo, nu_hi].
inline ValidatedScenario random_scenario(std::mt19937_64& rng, int dim, int n_users,
                                         double nu_lo, double nu_hi, double height = 0.0) {
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> nu(nu_lo, nu_hi);
  std::uniform_real_distribution<double> beta(0.25, 4.0);
  Scenario s;
  s.dimension = dim;
  s.height = height;
  for (int k = 0; k < n_users; ++k) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = coord(rng);
    s.users.push_back(user(std::move(x), beta(rng), nu(rng)));
  }
  return bsloc::validate(std::move(s));
}

/// Central-difference gradient, the independent check for the analytic one.
inline Vec finite_difference_gradient(const Vec& c, const ValidatedScenario& s,
                                      double step) {
  Vec g(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    Vec hi = c;
    Vec lo = c;
    hi[i] += step;
    lo[i] -= step;
    g[i] = (bsloc::objective(hi, s) - bsloc::objective(lo, s)) / (2.0 * step);
  }
  return g;
}

}  // namespace bsloc_test
