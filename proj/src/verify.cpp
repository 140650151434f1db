#include "bsloc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bsloc/nnls.hpp"

namespace bsloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_set_diameter(const std::vector<Vec>& pts) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      d2 = std::max(d2, (pts[i] - pts[j]).squaredNorm());
    }
  }
  return std::sqrt(d2);
}

}  // namespace

KktReport kkt_check(const Vec& c, const ValidatedScenario& s, double tol,
                    const std::vector<double>* powers, const std::vector<double>* mu) {
  const std::vector<Ball>& balls = s.constraints();
  if (powers && powers->size() != s.size()) {
    throw ContractError("kkt_check: powers length does not match the user count");
  }
  if (mu && mu->size() != balls.size()) {
    throw ContractError("kkt_check: mu length does not match the constraint count");
  }

  KktReport rep;
  rep.lambda.assign(s.size(), 1.0);

  Vec g = stationarity_sum(c, s);  // validates c
  double scale = stationarity_scale(s);
  if (mu) {
    for (std::size_t l = 0; l < balls.size(); ++l) {
      g += (2.0 * (*mu)[l]) * (c - balls[l].center);
      scale += 2.0 * (*mu)[l] * balls[l].radius;
    }
  }

  const std::vector<int> kinks = nonsmooth_users(c, s);
  if (!kinks.empty()) {
    double bound = 0.0;
    for (int k : kinks) bound += s.user(static_cast<std::size_t>(k)).beta;
    const double excess = std::max(0.0, g.norm() - bound);
    rep.stationarity_residual = scale > 0.0 ? excess / scale : excess;
    rep.subgradient_case = SubgradientCase{kinks.front(), g.norm() <= bound};
  } else {
    const double gn = g.norm();
    rep.stationarity_residual = scale > 0.0 ? gn / scale : gn;
  }

  // Complementary slackness and primal/dual feasibility.
  auto [least, total] = power_allocation(c, s);
  const double power_scale = std::max(total, std::numeric_limits<double>::min());
  double slack = 0.0;
  bool feasible = true;
  if (powers) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      slack = std::max(slack, std::abs((*powers)[k] - least[k]) / power_scale);
      if ((*powers)[k] < least[k] - tol * power_scale) feasible = false;
    }
  }
  for (std::size_t l = 0; l < balls.size(); ++l) {
    const double d = (c - balls[l].center).norm();
    if (d > balls[l].radius * (1.0 + 1e-9)) feasible = false;
    if (mu) {
      if ((*mu)[l] < 0.0) feasible = false;
      if ((*mu)[l] > 0.0 && balls[l].radius > 0.0) {
        slack = std::max(slack, std::abs(d - balls[l].radius) / balls[l].radius);
      }
    }
  }
  rep.complementary_slackness_max = slack;
  rep.primal_feasibility_ok = feasible;

  const bool stationary = rep.stationarity_residual <= tol;
  const bool nonsmooth_ok = rep.subgradient_case && rep.subgradient_case->optimal;
  rep.passed = (stationary || nonsmooth_ok) && feasible && slack <= tol;
  return rep;
}

HullCertificate hull_membership(const Vec& c, const std::vector<Vec>& points,
                                double tol) {
  if (points.empty()) {
    throw ContractError("hull_membership: needs at least one point");
  }
  for (const Vec& p : points) {
    if (p.size() != c.size()) {
      throw ContractError("hull_membership: point/query dimension mismatch");
    }
  }
  const Eigen::Index dim = c.size();
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  const double D = point_set_diameter(points);
  const double scale = D > 0.0 ? D : 1.0;

  // Feasibility least squares: sum q_k (x_k - c) = 0 plus sum q_k = 1,
  // solved over q >= 0; position rows normalized so both equation blocks
  // carry comparable weight.
  Eigen::MatrixXd A(dim + 1, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A.col(k).head(dim) = (points[static_cast<std::size_t>(k)] - c) / scale;
    A(dim, k) = 1.0;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim + 1);
  b[dim] = 1.0;
  Eigen::VectorXd q = nnls(A, b);

  HullCertificate cert;
  cert.coefficients.assign(points.size(), 0.0);
  const double qsum = q.sum();
  if (qsum > 1e-12) {
    q /= qsum;
    Vec combo = Vec::Zero(dim);
    for (Eigen::Index k = 0; k < n; ++k) {
      combo += q[k] * points[static_cast<std::size_t>(k)];
      cert.coefficients[static_cast<std::size_t>(k)] = q[k];
    }
    cert.residual = (combo - c).norm();
  } else {
    // Degenerate fit (c extremely far): certify against the nearest
    // vertex, the best single-point simplex element.
    std::size_t nearest = 0;
    double best = kInf;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const double d = (points[k] - c).norm();
      if (d < best) {
        best = d;
        nearest = k;
      }
    }
    cert.coefficients[nearest] = 1.0;
    cert.residual = best;
  }
  cert.member = cert.residual <= tol * D;
  return cert;
}

GridResult grid_oracle(const ValidatedScenario& s, int resolution) {
  const int d = s.dimension();
  if (resolution < 2 || resolution > 2000) {
    throw ContractError("grid_oracle: resolution must lie in [2, 2000]");
  }
  double evals = 1.0;
  for (int i = 0; i < d; ++i) evals *= resolution;
  if (evals > 1e9) {
    throw ContractError("grid_oracle: refusing more than 1e9 evaluations");
  }

  Vec lo = s.user(0).position;
  Vec hi = s.user(0).position;
  for (std::size_t k = 1; k < s.size(); ++k) {
    lo = lo.cwiseMin(s.user(k).position);
    hi = hi.cwiseMax(s.user(k).position);
  }
  // A constrained optimum is a convex combination of user positions and
  // ball centers, and the feasible set may sit entirely outside the user
  // bounding box (one faraway user, say), so grow the box to cover every
  // constraint ball before padding.
  for (const Ball& b : s.constraints()) {
    lo = lo.cwiseMin((b.center.array() - b.radius).matrix());
    hi = hi.cwiseMax((b.center.array() + b.radius).matrix());
  }
  double pad_scale = s.diameter();
  if (!s.constraints().empty()) pad_scale = std::max(pad_scale, (hi - lo).norm());
  const double pad = 0.01 * pad_scale;
  lo.array() -= pad;
  hi.array() += pad;
  const Vec step = (hi - lo) / static_cast<double>(resolution - 1);

  const std::vector<Ball>& balls = s.constraints();
  const int n1 = d >= 2 ? resolution : 1;
  const int n2 = d >= 3 ? resolution : 1;

  struct Best {
    double value = kInf;
    long flat = -1;
    Vec point;
  };

  auto scan_range = [&](int i0_begin, int i0_end, Best& out) {
    Vec p(d);
    for (int i0 = i0_begin; i0 < i0_end; ++i0) {
      p[0] = lo[0] + step[0] * i0;
      for (int i1 = 0; i1 < n1; ++i1) {
        if (d >= 2) p[1] = lo[1] + step[1] * i1;
        for (int i2 = 0; i2 < n2; ++i2) {
          if (d >= 3) p[2] = lo[2] + step[2] * i2;
          bool ok = true;
          for (const Ball& b : balls) {
            if ((p - b.center).norm() > b.radius) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          const double v = objective(p, s);
          if (v < out.value) {
            out.value = v;
            out.flat = (static_cast<long>(i0) * n1 + i1) * n2 + i2;
            out.point = p;
          }
        }
      }
    }
  };

  unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
  if (workers < 1) workers = 1;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(resolution));
  std::vector<Best> partial(workers);
  if (workers == 1) {
    scan_range(0, resolution, partial[0]);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (resolution + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const int beg = static_cast<int>(w) * chunk;
      const int end = std::min(resolution, beg + chunk);
      if (beg >= end) break;
      pool.emplace_back([&, beg, end, w] { scan_range(beg, end, partial[w]); });
    }
    for (std::thread& t : pool) t.join();
  }

  // Deterministic reduction: the same winner a serial index-order scan
  // would pick (strictly smaller value, ties to the lower flat index).
  Best best;
  for (const Best& cand : partial) {
    if (cand.flat < 0) continue;
    if (cand.value < best.value ||
        (cand.value == best.value && best.flat >= 0 && cand.flat < best.flat)) {
      best = cand;
    }
  }
  if (best.flat < 0) {
    throw InfeasibleError("grid_oracle: no grid node satisfies the constraints", 0.0);
  }
  return GridResult{best.point, best.value};
}

}  // namespace bsloc
