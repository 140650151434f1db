#include "bsloc/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bsloc/nnls.hpp"
#include "descent.hpp"

namespace bsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_balls(const std::vector<Ball>& balls, int dimension, const char* where) {
  if (balls.empty()) {
    throw ContractError(std::string(where) + ": needs at least one ball");
  }
  for (std::size_t l = 0; l < balls.size(); ++l) {
    if (balls[l].center.size() != dimension) {
      throw ContractError(std::string(where) + ": ball " + std::to_string(l) +
                          " has a center of dimension " +
                          std::to_string(balls[l].center.size()) + ", expected " +
                          std::to_string(dimension));
    }
  }
}

Vec project_ball(const Vec& p, const Ball& b) {
  const double d = (p - b.center).norm();
  if (d <= b.radius) return p;
  return b.center + (b.radius / d) * (p - b.center);
}

// max_l (|p - a_l| - r_l): positive outside the intersection, and its
// negative is the smallest slack when inside.
double max_violation(const Vec& p, const std::vector<Ball>& balls) {
  double v = -kInf;
  for (const Ball& b : balls) v = std::max(v, (p - b.center).norm() - b.radius);
  return v;
}

bool feasible_within(const Vec& p, const std::vector<Ball>& balls, double rel) {
  for (const Ball& b : balls) {
    if ((p - b.center).norm() > b.radius * (1.0 + rel)) return false;
  }
  return true;
}

}  // namespace

FeasibilityReport check_feasible(const std::vector<Ball>& balls, int dimension) {
  check_balls(balls, dimension, "check_feasible");
  Vec p = Vec::Zero(dimension);
  for (const Ball& b : balls) p += b.center;
  p /= static_cast<double>(balls.size());

  FeasibilityReport rep;
  double best_violation = std::max(0.0, max_violation(p, balls));
  // Cyclic projections: converge into the intersection when it is
  // nonempty, otherwise hover near the minimal-gap configuration.
  for (int it = 0; it < 5000 && best_violation > 0.0; ++it) {
    for (const Ball& b : balls) p = project_ball(p, b);
    best_violation = std::min(best_violation, std::max(0.0, max_violation(p, balls)));
  }
  rep.residual = best_violation;
  if (best_violation > 0.0) return rep;  // absent: presumed infeasible

  // Feasible; push toward maximal slack so callers get a strictly
  // interior point whenever one exists (diminishing-step ascent on the
  // concave min-slack function).
  double slack = -max_violation(p, balls);
  Vec best_point = p;
  double best_slack = slack;
  double rmin = kInf;
  for (const Ball& b : balls) rmin = std::min(rmin, b.radius);
  for (int it = 1; it <= 300; ++it) {
    // Supergradient at the tightest ball: step away from its boundary.
    std::size_t tight = 0;
    double worst = kInf;
    for (std::size_t l = 0; l < balls.size(); ++l) {
      const double sl = balls[l].radius - (p - balls[l].center).norm();
      if (sl < worst) {
        worst = sl;
        tight = l;
      }
    }
    const Vec away = balls[tight].center - p;
    const double dist = away.norm();
    if (dist == 0.0) break;  // at the tightest ball's center: slack is maximal
    const Vec q = p + (0.5 * rmin / it) * (away / dist);
    const double sq = -max_violation(q, balls);
    if (sq > slack) {
      p = q;
      slack = sq;
      if (sq > best_slack) {
        best_slack = sq;
        best_point = q;
      }
    }
  }
  rep.point = best_point;
  rep.min_slack = best_slack;
  return rep;
}

Vec project_onto_intersection(const Vec& c, const std::vector<Ball>& balls, double tol) {
  check_balls(balls, static_cast<int>(c.size()), "project_onto_intersection");
  if (!c.allFinite()) {
    throw ContractError("project_onto_intersection: point must be finite");
  }
  if (balls.size() == 1) return project_ball(c, balls.front());

  double rmax = 0.0;
  for (const Ball& b : balls) rmax = std::max(rmax, b.radius);
  const double eps = tol * rmax;

  // Dykstra's alternating projections with per-ball corrections: unlike
  // plain cyclic projection this converges to the Euclidean projection,
  // not just some feasible point.
  Vec p = c;
  std::vector<Vec> correction(balls.size(), Vec::Zero(c.size()));
  for (int it = 0; it < 50000; ++it) {
    const Vec prev = p;
    for (std::size_t l = 0; l < balls.size(); ++l) {
      const Vec z = p + correction[l];
      p = project_ball(z, balls[l]);
      correction[l] = z - p;
    }
    if ((p - prev).norm() <= 0.25 * eps && max_violation(p, balls) <= eps) {
      return p;
    }
  }
  if (max_violation(p, balls) <= eps) return p;  // settled slowly but feasibly
  const FeasibilityReport rep = check_feasible(balls, static_cast<int>(c.size()));
  if (!rep.point) {
    throw InfeasibleError(
        "project_onto_intersection: the ball intersection appears empty",
        rep.residual);
  }
  // Feasible but unsettled: land inside via cyclic projections from the
  // current iterate (accuracy degraded, still a valid feasible point).
  for (int it = 0; it < 1000 && max_violation(p, balls) > eps; ++it) {
    for (const Ball& b : balls) p = project_ball(p, b);
  }
  return p;
}

DualRecovery recover_duals(const Vec& c_star, const ValidatedScenario& s,
                           const std::vector<Ball>& balls, double tol) {
  check_balls(balls, s.dimension(), "recover_duals");
  if (!feasible_within(c_star, balls, 1e-9)) {
    throw ContractError("recover_duals: the point violates a ball constraint");
  }
  const Vec g = gradient(c_star, s);  // throws at nonsmooth points

  std::vector<std::size_t> active;
  for (std::size_t l = 0; l < balls.size(); ++l) {
    if ((c_star - balls[l].center).norm() >= balls[l].radius * (1.0 - tol)) {
      active.push_back(l);
    }
  }

  DualRecovery rec;
  rec.mu.assign(balls.size(), 0.0);
  Eigen::VectorXd mu_active;
  Eigen::MatrixXd M(s.dimension(), static_cast<Eigen::Index>(active.size()));
  if (!active.empty()) {
    for (std::size_t j = 0; j < active.size(); ++j) {
      M.col(static_cast<Eigen::Index>(j)) = 2.0 * (c_star - balls[active[j]].center);
    }
    mu_active = nnls(M, -g);
    const auto cod = M.completeOrthogonalDecomposition();
    rec.dependent_normals = cod.rank() < static_cast<Eigen::Index>(active.size());
    if (rec.dependent_normals) {
      // Bias toward the minimum-norm multipliers with a small ridge; keep
      // the result only if it fits the stationarity equation as well.
      const double ridge = 1e-7 * M.norm();
      Eigen::MatrixXd Mr(M.rows() + M.cols(), M.cols());
      Eigen::VectorXd br(M.rows() + M.cols());
      Mr.topRows(M.rows()) = M;
      Mr.bottomRows(M.cols()) = ridge * Eigen::MatrixXd::Identity(M.cols(), M.cols());
      br.head(M.rows()) = -g;
      br.tail(M.cols()).setZero();
      const Eigen::VectorXd polished = nnls(Mr, br);
      if ((M * polished + g).norm() <= (M * mu_active + g).norm() * (1.0 + 1e-6)) {
        mu_active = polished;
      }
    }
    for (std::size_t j = 0; j < active.size(); ++j) {
      rec.mu[active[j]] = mu_active[static_cast<Eigen::Index>(j)];
    }
  }

  double scale = stationarity_scale(s);
  for (std::size_t l = 0; l < balls.size(); ++l) {
    scale += 2.0 * rec.mu[l] * balls[l].radius;
  }
  Vec residual_vec = g;
  if (!active.empty()) residual_vec += M * mu_active;
  const double raw = residual_vec.norm();
  rec.residual = scale > 0.0 ? raw / scale : raw;
  if (rec.residual > tol) {
    throw DualRecoveryError(
        "recover_duals: stationarity residual " + std::to_string(rec.residual) +
        " exceeds tolerance " + std::to_string(tol) +
        "; the point does not satisfy the optimality system",
        rec.residual);
  }
  return rec;
}

ConstrainedSolution solve_constrained(const ValidatedScenario& s,
                                      const SolverOptions& options) {
  const std::vector<Ball>& balls = s.constraints();
  if (balls.empty()) {
    throw ContractError("solve_constrained: scenario has no location constraints; use solve");
  }
  if (!(options.tol_grad > 0.0) || !(options.tol_step > 0.0)) {
    throw ContractError("solve_constrained: tolerances must be positive");
  }
  if (options.max_iters < 1) {
    throw ContractError("solve_constrained: max_iters must be at least 1");
  }
  if (!(options.damping_min > 0.0) || options.damping_min > 1.0) {
    throw ContractError("solve_constrained: damping_min must lie in (0, 1]");
  }

  const FeasibilityReport feas = check_feasible(balls, s.dimension());
  if (!feas.point) {
    throw InfeasibleError("solve_constrained: constraint balls have empty intersection",
                          feas.residual);
  }

  const double L = s.length_scale();
  const double Dm = s.metric_diameter();
  const double min_step = options.tol_step * L;
  const double active_tol = 1e-7;
  // Residual level that declares convergence; comfortably below the
  // certificate tolerances used downstream.
  const double tol_term = std::max(10.0 * options.tol_grad, 1e-9);

  Vec c;
  if (options.initial_point) {
    c = *options.initial_point;
    if (c.size() != s.dimension() || !c.allFinite()) {
      throw ContractError("solve_constrained: bad initial point");
    }
  } else {
    c = Vec::Zero(s.dimension());
    double mass = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      c += s.user(k).beta * s.user(k).position;
      mass += s.user(k).beta;
    }
    c /= mass;
  }
  c = project_onto_intersection(c, balls, 1e-13);
  double f = objective(c, s);

  ConstrainedSolution sol;
  sol.mu.assign(balls.size(), 0.0);

  int iter = 0;
  bool kink_stop = false;
  for (;;) {
    if (!nonsmooth_users(c, s).empty()) {
      // The iterate sits exactly on a nu = 1 user.  If every constraint
      // has slack there and the unconstrained subgradient test passes,
      // the point is optimal with all multipliers zero.
      const std::size_t j = static_cast<std::size_t>(nonsmooth_users(c, s).front());
      bool interior = true;
      for (const Ball& b : balls) {
        if ((c - b.center).norm() >= b.radius * (1.0 - active_tol)) interior = false;
      }
      if (interior && subgradient_test(j, s)) {
        sol.converged = true;
        kink_stop = true;
        break;
      }
    } else {
      try {
        const DualRecovery rec = recover_duals(c, s, balls, active_tol);
        if (rec.residual <= tol_term) {
          sol.converged = true;
          break;
        }
      } catch (const DualRecoveryError&) {
        // not optimal yet
      } catch (const SingularPointError&) {
        // steep co-located term: no smooth certificate here; keep stepping
      }
    }
    if (iter >= options.max_iters) break;

    bool stepped = false;
    // Fixed-point candidate, halved toward the iterate, projected.
    try {
      const std::vector<double> theta = fixed_point_weights(c, s);
      Vec t = Vec::Zero(s.dimension());
      for (std::size_t k = 0; k < s.size(); ++k) t += theta[k] * s.user(k).position;
      const Vec full = t - c;
      for (double a = 1.0; a >= options.damping_min; a *= 0.5) {
        const Vec cand = project_onto_intersection(c + a * full, balls, 1e-13);
        const double delta = objective_delta(c, cand, s);
        if (delta < 0.0) {
          c = cand;
          f += delta;
          stepped = true;
          break;
        }
        if (0.5 * a * full.norm() < min_step) break;
      }
    } catch (const SingularPointError&) {
      // weights diverge at c; use the gradient path
    }
    if (!stepped) {
      const Vec g = stationarity_sum(c, s);
      const double gn = g.norm();
      if (gn > 0.0 && std::isfinite(gn)) {
        const Vec dir = -g / gn;
        for (double t = 0.5 * std::max(Dm, L); t >= min_step; t *= 0.5) {
          const Vec cand = project_onto_intersection(c + t * dir, balls, 1e-13);
          const double delta = objective_delta(c, cand, s);
          if (delta < 0.0) {
            c = cand;
            f += delta;
            stepped = true;
            break;
          }
        }
      }
    }
    if (!stepped) break;
    ++iter;
  }

  sol.c_star = c;
  sol.iterations = iter;
  auto [powers, total] = power_allocation(c, s);
  sol.per_user_power = std::move(powers);
  sol.total_power = total;

  if (!kink_stop) {
    try {
      DualRecovery rec = recover_duals(c, s, balls, active_tol);
      sol.mu = std::move(rec.mu);
      sol.stationarity_residual = rec.residual;
      sol.dependent_normals = rec.dependent_normals;
    } catch (const DualRecoveryError& e) {
      sol.converged = false;
      sol.stationarity_residual = e.residual();
    } catch (const SingularPointError&) {
      sol.converged = false;
      sol.stationarity_residual = kInf;
    }
  }

  for (std::size_t l = 0; l < balls.size(); ++l) {
    if ((c - balls[l].center).norm() >= balls[l].radius * (1.0 - active_tol)) {
      sol.active_set.push_back(static_cast<int>(l));
    }
  }

  // Worst relative complementary slackness over the positive multipliers.
  double worst = 0.0;
  for (std::size_t l = 0; l < balls.size(); ++l) {
    if (sol.mu[l] > 0.0 && balls[l].radius > 0.0) {
      worst = std::max(worst, std::abs((c - balls[l].center).norm() - balls[l].radius) /
                                  balls[l].radius);
    }
  }
  sol.complementary_slackness_max = worst;

  // Extended convex weights over users then ball centers:
  //   Theta = sum_k beta_k nu_k d_k^(nu_k-2) + sum_l 2 mu_l.
  sol.theta_extended.assign(s.size() + balls.size(), 0.0);
  int steep_vertex = -1;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.distance(c, k) == 0.0 && s.user(k).nu < 2.0) steep_vertex = static_cast<int>(k);
  }
  if (steep_vertex >= 0) {
    // c* coincides with a user whose term dominates every finite weight.
    sol.theta_extended[static_cast<std::size_t>(steep_vertex)] = 1.0;
  } else {
    double big_theta = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double d = s.distance(c, k);
      const UserSpec& u = s.user(k);
      const double w =
          d == 0.0 ? (u.nu == 2.0 ? u.beta * u.nu : 0.0)
                   : u.beta * u.nu * std::pow(d, u.nu - 2.0);
      sol.theta_extended[k] = w;
      big_theta += w;
    }
    for (std::size_t l = 0; l < balls.size(); ++l) {
      sol.theta_extended[s.size() + l] = 2.0 * sol.mu[l];
      big_theta += 2.0 * sol.mu[l];
    }
    if (big_theta > 0.0) {
      for (double& t : sol.theta_extended) t /= big_theta;
    }
  }
  return sol;
}

}  // namespace bsloc
