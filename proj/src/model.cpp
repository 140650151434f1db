#include "bsloc/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bsloc {

namespace {

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  out << "invalid input (" << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s") << "):";
  for (const auto& v : violations) {
    out << "\n  - " << v.field;
    if (v.index >= 0) out << "[" << v.index << "]";
    out << ": " << v.message;
  }
  return out.str();
}

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(format_violations(violations)),
      violations_(std::move(violations)) {}

ValidationError::ValidationError(std::string field, int index, std::string message)
    : ValidationError(std::vector<Violation>{
          Violation{std::move(field), index, std::move(message)}}) {}

SingularPointError::SingularPointError(const std::string& what,
                                       std::vector<int> user_indices)
    : std::runtime_error(what), user_indices_(std::move(user_indices)) {}

InfeasibleError::InfeasibleError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual) {}

DualRecoveryError::DualRecoveryError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual) {}

double beta_from_link(const LinkBudget& budget) {
  std::vector<Violation> bad;
  auto require = [&](bool ok, const char* field, const std::string& msg) {
    if (!ok) bad.push_back({field, -1, msg});
  };
  require(std::isfinite(budget.rate_bps) && budget.rate_bps > 0.0, "rate_bps",
          "must be finite and > 0");
  require(std::isfinite(budget.bandwidth_hz) && budget.bandwidth_hz > 0.0,
          "bandwidth_hz", "must be finite and > 0");
  require(std::isfinite(budget.snr_gap) && budget.snr_gap >= 1.0, "snr_gap",
          "must be finite and >= 1");
  require(std::isfinite(budget.noise_w) && budget.noise_w > 0.0, "noise_w",
          "must be finite and > 0");
  require(std::isfinite(budget.alpha) && budget.alpha > 0.0, "alpha",
          "must be finite and > 0");
  if (!bad.empty()) throw ValidationError(std::move(bad));

  const double spectral = budget.rate_bps / budget.bandwidth_hz;
  const double snr_min = std::exp2(spectral) - 1.0;
  if (!std::isfinite(snr_min)) {
    throw ValidationError(
        "rate_bps", -1,
        "2^(rate/bandwidth) overflows; rescale rate or bandwidth");
  }
  const double beta = snr_min * budget.snr_gap * budget.noise_w / budget.alpha;
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw ValidationError("rate_bps", -1,
                          "computed beta is not a positive finite number; "
                          "rescale the budget");
  }
  return beta;
}

double alpha_free_space(double wavelength_m) {
  if (!(std::isfinite(wavelength_m) && wavelength_m > 0.0)) {
    throw ValidationError("wavelength_m", -1, "must be finite and > 0");
  }
  const double s = wavelength_m / (4.0 * M_PI);
  return s * s;
}

double alpha_two_ray(double ht_m, double hr_m) {
  if (!(std::isfinite(ht_m) && ht_m > 0.0)) {
    throw ValidationError("ht_m", -1, "must be finite and > 0");
  }
  if (!(std::isfinite(hr_m) && hr_m > 0.0)) {
    throw ValidationError("hr_m", -1, "must be finite and > 0");
  }
  return ht_m * ht_m * hr_m * hr_m;
}

ValidatedScenario::ValidatedScenario(Scenario scenario)
    : scenario_(std::move(scenario)) {
  const auto& users = scenario_.users;
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      diameter_ = std::max(diameter_,
                           (users[i].position - users[j].position).norm());
    }
  }
}

double ValidatedScenario::length_scale() const {
  const double d = metric_diameter();
  return d > 0.0 ? d : 1.0;
}

double ValidatedScenario::distance(const Vec& c, std::size_t k) const {
  const double planar2 = (c - scenario_.users[k].position).squaredNorm();
  const double h = scenario_.height;
  return h > 0.0 ? std::sqrt(planar2 + h * h) : std::sqrt(planar2);
}

std::vector<Vec> ValidatedScenario::positions() const {
  std::vector<Vec> out;
  out.reserve(scenario_.users.size());
  for (const auto& u : scenario_.users) out.push_back(u.position);
  return out;
}

ValidatedScenario validate(Scenario scenario) {
  std::vector<Violation> bad;
  const int d = scenario.dimension;
  if (d < 1 || d > 3) {
    bad.push_back({"dimension", -1, "must be 1, 2 or 3"});
  }
  if (!std::isfinite(scenario.height) || scenario.height < 0.0) {
    bad.push_back({"height", -1, "must be finite and >= 0"});
  } else if (scenario.height > 0.0 && d == 3) {
    bad.push_back({"height", -1,
                   "elevated transmitter requires users on a line or plane "
                   "(dimension 1 or 2)"});
  }
  if (scenario.users.empty()) {
    bad.push_back({"users", -1, "at least one user is required"});
  }
  for (std::size_t k = 0; k < scenario.users.size(); ++k) {
    const auto& u = scenario.users[k];
    const int idx = static_cast<int>(k);
    if (u.position.size() != d) {
      bad.push_back({"users.position", idx,
                     "has length " + std::to_string(u.position.size()) +
                         ", expected " + std::to_string(d)});
    } else if (!all_finite(u.position)) {
      bad.push_back({"users.position", idx, "coordinates must be finite"});
    }
    if (!std::isfinite(u.beta) || u.beta <= 0.0) {
      bad.push_back({"users.beta", idx, "must be finite and > 0"});
    }
    if (!std::isfinite(u.nu) || u.nu < 1.0) {
      bad.push_back({"users.nu", idx,
                     "pathloss exponent must be >= 1 (got " +
                         std::to_string(u.nu) + ")"});
    }
  }
  for (std::size_t l = 0; l < scenario.constraints.size(); ++l) {
    const auto& b = scenario.constraints[l];
    const int idx = static_cast<int>(l);
    if (b.center.size() != d) {
      bad.push_back({"constraints.center", idx,
                     "has length " + std::to_string(b.center.size()) +
                         ", expected " + std::to_string(d)});
    } else if (!all_finite(b.center)) {
      bad.push_back({"constraints.center", idx, "coordinates must be finite"});
    }
    if (!std::isfinite(b.radius) || b.radius <= 0.0) {
      bad.push_back({"constraints.radius", idx, "must be finite and > 0"});
    }
  }
  if (!bad.empty()) throw ValidationError(std::move(bad));
  return ValidatedScenario(std::move(scenario));
}

}  // namespace bsloc
