#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bsloc {

using Vec = Eigen::VectorXd;

/// Per-user QoS and propagation parameters that compile into a demand
/// coefficient beta (see beta_from_link).  SI units throughout.
struct LinkBudget {
  double rate_bps = 0.0;      // target rate R0
  double bandwidth_hz = 0.0;  // channel bandwidth
  double snr_gap = 1.0;       // SNR gap to capacity, >= 1
  double noise_w = 0.0;       // noise power at the receiver
  double alpha = 0.0;         // propagation constant, m^nu scale
};

/// One served user: position in meters, demand coefficient beta (W*m^-nu)
/// and pathloss exponent nu (>= 1).
struct UserSpec {
  Vec position;
  double beta = 1.0;
  double nu = 2.0;
};

/// Admissible-location ball |c - center| <= radius.
struct Ball {
  Vec center;
  double radius = 0.0;
};

/// A placement problem: users, spatial dimension, optional transmitter
/// height above the user plane, optional location constraints.
struct Scenario {
  std::vector<UserSpec> users;
  int dimension = 2;
  double height = 0.0;
  std::vector<Ball> constraints;
};

struct Violation {
  std::string field;
  int index = -1;  // user/ball index, -1 for scenario-level issues
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  ValidationError(std::string field, int index, std::string message);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Thrown when a gradient or fixed-point weight evaluation hits a point
/// where the objective (or the weight denominator) is singular.  Carries
/// the indices of the offending users.
class SingularPointError : public std::runtime_error {
 public:
  SingularPointError(const std::string& what, std::vector<int> user_indices);
  const std::vector<int>& user_indices() const { return user_indices_; }

 private:
  std::vector<int> user_indices_;
};

/// Precondition violation on an operation that has a narrower contract
/// than the scenario invariants (wrong nu for a closed form, etc.).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double residual);
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

class DualRecoveryError : public std::runtime_error {
 public:
  DualRecoveryError(const std::string& what, double residual);
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

}  // namespace bsloc
