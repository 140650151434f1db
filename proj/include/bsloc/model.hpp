#pragma once

#include "bsloc/types.hpp"

namespace bsloc {

/// Demand coefficient for one user:
///   beta = (2^(rate/bandwidth) - 1) * snr_gap * noise / alpha.
/// Strictly positive and strictly increasing in the rate demand.
/// Throws ValidationError on invalid fields or when 2^(rate/bandwidth)
/// overflows a double.
double beta_from_link(const LinkBudget& budget);

/// Free-space propagation constant (lambda / 4pi)^2, for nu = 2.
double alpha_free_space(double wavelength_m);

/// Two-ray ground-reflection constant ht^2 * hr^2, for nu = 4.
double alpha_two_ray(double ht_m, double hr_m);

class ValidatedScenario;

/// Checks every scenario invariant and returns a validated wrapper.
/// All violations are collected before throwing, each tagged with the
/// index of the offending user or ball.
ValidatedScenario validate(Scenario scenario);

/// A scenario that passed validate(), plus derived geometry used all
/// over the solver: the user-set diameter and the elevated distance.
class ValidatedScenario {
 public:
  const Scenario& scenario() const { return scenario_; }
  const std::vector<UserSpec>& users() const { return scenario_.users; }
  const UserSpec& user(std::size_t k) const { return scenario_.users[k]; }
  const std::vector<Ball>& constraints() const { return scenario_.constraints; }
  int dimension() const { return scenario_.dimension; }
  double height() const { return scenario_.height; }
  bool elevated() const { return scenario_.height > 0.0; }
  std::size_t size() const { return scenario_.users.size(); }

  /// Largest pairwise distance between user positions.
  double diameter() const { return diameter_; }
  /// diameter() + height: the natural length scale of the metric.
  double metric_diameter() const { return diameter_ + scenario_.height; }
  /// metric_diameter(), floored at 1 for degenerate single-point sets so
  /// relative tolerances stay meaningful.
  double length_scale() const;

  /// Transmitter-to-user distance, sqrt(|c - x_k|^2 + h^2).
  double distance(const Vec& c, std::size_t k) const;

  std::vector<Vec> positions() const;

 private:
  friend ValidatedScenario validate(Scenario scenario);
  explicit ValidatedScenario(Scenario scenario);

  Scenario scenario_;
  double diameter_ = 0.0;
};

}  // namespace bsloc
