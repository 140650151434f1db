#include "bsloc/solver.hpp"

#include "descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bsloc {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_query_point(const Vec& c, const ValidatedScenario& s, const char* where) {
  if (c.size() != s.dimension()) {
    throw ContractError(std::string(where) + ": query point has " +
                        std::to_string(c.size()) + " coordinates but the scenario is " +
                        std::to_string(s.dimension()) + "-dimensional");
  }
  if (!c.allFinite()) {
    throw ContractError(std::string(where) + ": query point must be finite");
  }
}

std::vector<int> planar_colocated(const Vec& c, const ValidatedScenario& s) {
  std::vector<int> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if ((c - s.user(k).position).isZero(0.0)) out.push_back(static_cast<int>(k));
  }
  return out;
}

// sum_k beta_k nu_k d_k(c)^(nu_k - 1): the gradient magnitude the terms
// could reach at c itself.  A much sharper stationarity yardstick than
// the diameter-based scale when exponents are large.
double local_gradient_scale(const Vec& c, const ValidatedScenario& s) {
  double scale = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    const double d = s.distance(c, k);
    scale += u.beta * u.nu * (d == 0.0 ? 0.0 : std::pow(d, u.nu - 1.0));
  }
  return scale;
}

// Limit of the fixed-point weights as the iterate approaches a user
// position where they diverge: the d^(nu-2) factors with the smallest
// exponent grow fastest, so all mass concentrates on the co-located
// users with minimal nu (< 2), beta-proportional among them.
std::vector<double> limit_weights_at_vertex(const Vec& c, const ValidatedScenario& s) {
  std::vector<double> theta(s.size(), 0.0);
  double nu_min = kInf;
  for (int k : planar_colocated(c, s)) {
    const double nu = s.user(static_cast<std::size_t>(k)).nu;
    if (nu < 2.0) nu_min = std::min(nu_min, nu);
  }
  double mass = 0.0;
  for (int k : planar_colocated(c, s)) {
    const UserSpec& u = s.user(static_cast<std::size_t>(k));
    if (u.nu == nu_min) {
      theta[static_cast<std::size_t>(k)] = u.beta;
      mass += u.beta;
    }
  }
  for (double& t : theta) t /= mass;
  return theta;
}

Vec apply_weights(const std::vector<double>& theta, const ValidatedScenario& s) {
  Vec c = Vec::Zero(s.dimension());
  for (std::size_t k = 0; k < s.size(); ++k) c += theta[k] * s.user(k).position;
  return c;
}

}  // namespace

// Subtracting two full objective sums caps the resolvable descent at
// sqrt(eps) relative; here each distance change comes from the displacement
// itself (d_b^2 - d_a^2 = u . (from + to - 2x), the height term cancels) and
// each power change goes through expm1/log1p, so every term keeps full
// relative precision however small the move.
double objective_delta(const Vec& from, const Vec& to, const ValidatedScenario& s) {
  const Vec u = to - from;
  double delta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& spec = s.user(k);
    const double da = s.distance(from, k);
    const double db = s.distance(to, k);
    if (da == db) continue;
    double term;
    if (da == 0.0 || db == 0.0) {
      term = std::pow(db, spec.nu) - std::pow(da, spec.nu);
    } else {
      const double dd = u.dot(from + to - 2.0 * spec.position) / (da + db);
      if (dd <= -da) {
        term = std::pow(db, spec.nu) - std::pow(da, spec.nu);
      } else {
        term = std::pow(da, spec.nu) * std::expm1(spec.nu * std::log1p(dd / da));
      }
    }
    delta += spec.beta * term;
  }
  return delta;
}

double objective(const Vec& c, const ValidatedScenario& s) {
  check_query_point(c, s, "objective");
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    total += u.beta * std::pow(s.distance(c, k), u.nu);
  }
  return total;
}

Vec gradient(const Vec& c, const ValidatedScenario& s) {
  check_query_point(c, s, "gradient");
  std::vector<int> offending;
  if (!s.elevated()) {
    for (int k : planar_colocated(c, s)) {
      if (s.user(static_cast<std::size_t>(k)).nu < 2.0) offending.push_back(k);
    }
  }
  if (!offending.empty()) {
    throw SingularPointError(
        "gradient: query point coincides with a user whose exponent is "
        "below 2; for nu = 1 use subgradient_test",
        offending);
  }
  return stationarity_sum(c, s);
}

std::vector<int> nonsmooth_users(const Vec& c, const ValidatedScenario& s) {
  std::vector<int> out;
  check_query_point(c, s, "nonsmooth_users");
  if (s.elevated()) return out;  // every distance is >= height > 0
  for (int k : planar_colocated(c, s)) {
    if (s.user(static_cast<std::size_t>(k)).nu == 1.0) out.push_back(k);
  }
  return out;
}

// An exactly co-located term with nu > 1 has a zero derivative (the
// limit of nu * d^(nu-1) as d -> 0); a co-located nu = 1 term is skipped
// and belongs to the subgradient bound.
Vec stationarity_sum(const Vec& c, const ValidatedScenario& s) {
  check_query_point(c, s, "stationarity_sum");
  Vec g = Vec::Zero(c.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    const double d = s.distance(c, k);
    if (d == 0.0) continue;
    g += (u.beta * u.nu * std::pow(d, u.nu - 2.0)) * (c - u.position);
  }
  return g;
}

std::vector<double> fixed_point_weights(const Vec& c, const ValidatedScenario& s) {
  check_query_point(c, s, "fixed_point_weights");
  const std::size_t n = s.size();
  // Work in log space: beta * nu * d^(nu-2) spans hundreds of orders of
  // magnitude once exponents get large, but only the ratios matter.
  std::vector<double> logw(n);
  std::vector<int> divergent;
  double top = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    const UserSpec& u = s.user(k);
    const double d = s.distance(c, k);
    if (d == 0.0) {
      if (u.nu < 2.0) {
        divergent.push_back(static_cast<int>(k));
        continue;
      }
      logw[k] = (u.nu == 2.0) ? std::log(u.beta * u.nu) : -kInf;
    } else {
      logw[k] = std::log(u.beta) + std::log(u.nu) + (u.nu - 2.0) * std::log(d);
    }
    top = std::max(top, logw[k]);
  }
  if (!divergent.empty()) {
    throw SingularPointError(
        "fixed-point weights diverge: query point coincides with a user "
        "whose exponent is below 2",
        divergent);
  }
  std::vector<double> theta(n, 0.0);
  if (top == -kInf) {
    // Every weight vanished, which needs every user co-located with the
    // query point with nu > 2: fall back to the beta-proportional limit.
    double mass = 0.0;
    for (std::size_t k = 0; k < n; ++k) mass += s.user(k).beta;
    for (std::size_t k = 0; k < n; ++k) theta[k] = s.user(k).beta / mass;
    return theta;
  }
  double mass = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    theta[k] = std::exp(logw[k] - top);
    mass += theta[k];
  }
  for (double& t : theta) t /= mass;
  return theta;
}

bool subgradient_test(std::size_t j, const ValidatedScenario& s) {
  if (j >= s.size()) {
    throw ContractError("subgradient_test: user index " + std::to_string(j) +
                        " out of range (scenario has " + std::to_string(s.size()) +
                        " users)");
  }
  if (s.elevated()) {
    throw ContractError(
        "subgradient_test: the objective is differentiable everywhere when "
        "height > 0; use gradient");
  }
  const Vec& xj = s.user(j).position;
  double bound = 0.0;
  Vec g = Vec::Zero(xj.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    if ((u.position - xj).isZero(0.0)) {
      if (u.nu == 1.0) bound += u.beta;  // nu > 1 terms contribute zero here
      continue;
    }
    const double d = s.distance(xj, k);
    g += (u.beta * u.nu * std::pow(d, u.nu - 2.0)) * (xj - u.position);
  }
  if (bound == 0.0) {
    throw ContractError(
        "subgradient_test: no nu = 1 user at this position, so the "
        "objective is differentiable there; use gradient");
  }
  return g.norm() <= bound;
}

std::pair<std::vector<double>, double> power_allocation(const Vec& c,
                                                        const ValidatedScenario& s) {
  check_query_point(c, s, "power_allocation");
  std::vector<double> powers(s.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    powers[k] = u.beta * std::pow(s.distance(c, k), u.nu);
    total += powers[k];
  }
  return {std::move(powers), total};
}

double stationarity_scale(const ValidatedScenario& s) {
  const double D = s.metric_diameter();
  double scale = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const UserSpec& u = s.user(k);
    // pow(0, 0) = 1 keeps nu = 1 terms contributing beta for degenerate
    // single-point scenarios.
    scale += u.beta * u.nu * std::pow(D, u.nu - 1.0);
  }
  return scale;
}

Solution solve(const ValidatedScenario& s, const SolverOptions& options) {
  if (!s.constraints().empty()) {
    throw ContractError("solve: scenario has location constraints; use solve_constrained");
  }
  if (!(options.tol_grad > 0.0) || !(options.tol_step > 0.0)) {
    throw ContractError("solve: tolerances must be positive");
  }
  if (options.max_iters < 1) {
    throw ContractError("solve: max_iters must be at least 1");
  }
  if (!(options.damping_min > 0.0) || options.damping_min > 1.0) {
    throw ContractError("solve: damping_min must lie in (0, 1]");
  }

  const double L = s.length_scale();
  const double Dm = s.metric_diameter();
  const double scale_g = stationarity_scale(s);
  // The fixed-point residual certifies proximity to the optimum even when
  // the diameter-based gradient scale is so large that the gradient test
  // is satisfied far from it (large exponents).
  const double fp_tol = std::max(10.0 * options.tol_grad, 1e-12);
  const double min_step = options.tol_step * L;

  Vec c;
  if (options.initial_point) {
    c = *options.initial_point;
    check_query_point(c, s, "solve");
  } else {
    c = Vec::Zero(s.dimension());
    double mass = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      c += s.user(k).beta * s.user(k).position;
      mass += s.user(k).beta;
    }
    c /= mass;
  }

  Solution sol;
  sol.unique = s.elevated();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.user(k).nu > 1.0) sol.unique = true;
  }

  double f = objective(c, s);
  sol.trace.push_back(f);

  auto nearest_vertex = [&s](const Vec& p) {
    std::size_t best = 0;
    double best_d2 = kInf;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double d2 = (p - s.user(k).position).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    return s.user(best).position;
  };

  // Prefer an exact user position when it costs nothing: landing exactly
  // on a vertex lets the kink logic certify it or step off it, where an
  // iterate that merely creeps toward it would stall.  Works on objective
  // changes measured from the current iterate c.
  auto snap_improve = [&](Vec cand, double delta) {
    const Vec v = nearest_vertex(cand);
    if (!(v - cand).isZero(0.0)) {
      const double dv = objective_delta(c, v, s);
      if (dv <= delta) return std::make_pair(v, dv);
    }
    return std::make_pair(std::move(cand), delta);
  };

  int iter = 0;
  bool at_kink = false;
  for (;;) {
    at_kink = !nonsmooth_users(c, s).empty();

    // --- optimality check at the current iterate ---
    if (at_kink) {
      const std::size_t j = static_cast<std::size_t>(nonsmooth_users(c, s).front());
      if (subgradient_test(j, s)) {
        sol.converged = true;
        sol.singular_vertex = static_cast<int>(j);
        break;
      }
    } else {
      const Vec g = stationarity_sum(c, s);
      const double gn = g.norm();
      const bool grad_ok = gn <= options.tol_grad * scale_g;
      const double scale_loc = local_gradient_scale(c, s);
      const bool grad_strict =
          std::isfinite(scale_loc) && gn <= options.tol_grad * scale_loc;
      bool fp_ok = false;
      try {
        const Vec t = apply_weights(fixed_point_weights(c, s), s);
        fp_ok = (t - c).norm() <= fp_tol * Dm + 1e-300;
      } catch (const SingularPointError&) {
        // weights diverge at c; the strict gradient test decides
      }
      if (std::isfinite(gn) && std::isfinite(f) && grad_ok && (fp_ok || grad_strict)) {
        sol.converged = true;
        break;
      }
    }

    if (iter >= options.max_iters) break;

    // --- one strictly descending step ---
    bool stepped = false;
    if (at_kink) {
      // The subgradient test failed: the smooth pull g exceeds the total
      // beta of the co-located nu = 1 users, so -g descends at rate at
      // least |g| - bound per unit step.  Backtrack until that shows.
      const Vec g = stationarity_sum(c, s);
      const double gn = g.norm();
      double bound = 0.0;
      for (int k : nonsmooth_users(c, s)) bound += s.user(static_cast<std::size_t>(k)).beta;
      if (gn > 0.0 && std::isfinite(gn)) {
        const Vec dir = -g / gn;
        const double slope = gn - bound;
        for (double t = 0.5 * std::max(Dm, L); t >= min_step; t *= 0.5) {
          const Vec cand = c + t * dir;
          const double delta = objective_delta(c, cand, s);
          if (delta <= -kArmijo * t * slope) {
            c = cand;
            f += delta;
            stepped = true;
            break;
          }
        }
      }
    } else {
      // Fixed-point step, halved toward the iterate until it descends.
      try {
        const Vec t = apply_weights(fixed_point_weights(c, s), s);
        const Vec full = t - c;
        for (double a = 1.0; a >= options.damping_min; a *= 0.5) {
          const Vec probe = c + a * full;
          auto [cand, delta] = snap_improve(probe, objective_delta(c, probe, s));
          if (delta < 0.0) {
            c = cand;
            f += delta;
            stepped = true;
            break;
          }
          if (0.5 * a * full.norm() < min_step) break;
        }
      } catch (const SingularPointError&) {
        // weights diverge at c (co-located nu < 2 user); fall through
      }
      if (!stepped) {
        // Backtracking descent along the negative gradient.
        const Vec g = stationarity_sum(c, s);
        const double gn = g.norm();
        if (gn > 0.0 && std::isfinite(gn)) {
          const Vec dir = -g / gn;
          for (double t = 0.5 * std::max(Dm, L); t >= min_step; t *= 0.5) {
            const Vec probe = c + t * dir;
            auto [cand, delta] = snap_improve(probe, objective_delta(c, probe, s));
            if (delta <= -kArmijo * t * gn && delta < 0.0) {
              c = cand;
              f += delta;
              stepped = true;
              break;
            }
          }
        }
      }
    }

    if (!stepped) break;  // no descent left at working precision
    sol.trace.push_back(f);
    ++iter;
  }

  sol.c_star = c;
  sol.iterations = iter;
  auto [powers, total] = power_allocation(c, s);
  sol.per_user_power = std::move(powers);
  sol.total_power = total;

  if (at_kink) {
    const Vec g = stationarity_sum(c, s);
    double bound = 0.0;
    for (int k : nonsmooth_users(c, s)) bound += s.user(static_cast<std::size_t>(k)).beta;
    const double excess = std::max(0.0, g.norm() - bound);
    sol.stationarity_residual = scale_g > 0.0 ? excess / scale_g : excess;
    sol.fixed_point_residual = 0.0;
    sol.theta = limit_weights_at_vertex(c, s);
  } else {
    const double gn = stationarity_sum(c, s).norm();
    sol.stationarity_residual = scale_g > 0.0 ? gn / scale_g : gn;
    try {
      sol.theta = fixed_point_weights(c, s);
      const double fp_res = (apply_weights(sol.theta, s) - c).norm();
      sol.fixed_point_residual = Dm > 0.0 ? fp_res / Dm : fp_res;
    } catch (const SingularPointError&) {
      sol.theta = limit_weights_at_vertex(c, s);
      sol.fixed_point_residual = 0.0;
    }
  }
  return sol;
}

}  // namespace bsloc
