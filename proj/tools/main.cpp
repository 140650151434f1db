#include <cctype>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsloc/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnconverged = 2;
constexpr int kExitVerifyFail = 3;

bsloc::ValidatedScenario load_validated(const std::string& path) {
  return bsloc::validate(bsloc::load_scenario(path));
}

bsloc::Vec parse_point(const std::string& text, int dimension) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      throw bsloc::ContractError("point: '" + token + "' is not a number");
    }
    while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used])))
      ++used;
    if (used != token.size())
      throw bsloc::ContractError("point: '" + token + "' is not a number");
    values.push_back(value);
  }
  if (values.size() != static_cast<std::size_t>(dimension)) {
    throw bsloc::ContractError("point: expected " + std::to_string(dimension) +
                               " comma-separated coordinates, got " +
                               std::to_string(values.size()));
  }
  bsloc::Vec point(dimension);
  for (int i = 0; i < dimension; ++i) point[i] = values[static_cast<std::size_t>(i)];
  return point;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw bsloc::ContractError("cannot open '" + out_path + "' for writing");
  out << text;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

int run_solve(const std::string& scenario_path, const std::string& method_name, double tol,
              int max_iters, const std::string& out_path) {
  const bsloc::ValidatedScenario s = load_validated(scenario_path);
  bsloc::Method method = bsloc::Method::kAuto;
  if (method_name == "fixed-point") method = bsloc::Method::kFixedPoint;
  if (method_name == "closed-form") method = bsloc::Method::kClosedForm;

  bsloc::SolverOptions options;
  options.tol_grad = tol;
  options.max_iters = max_iters;

  const bsloc::SolveReport report = bsloc::solve_scenario(s, method, options);
  write_output(out_path, bsloc::solution_to_json(report));
  return (report.converged && report.certificate.passed) ? kExitOk : kExitUnconverged;
}

int run_verify(const std::string& scenario_path, const std::string& point_text) {
  const bsloc::ValidatedScenario s = load_validated(scenario_path);
  const bsloc::Vec point = parse_point(point_text, s.dimension());
  const bsloc::VerifyReport report = bsloc::verify_point(point, s);
  std::cout << bsloc::kkt_report_to_json(report.kkt, &report.hull);
  return report.kkt.passed ? kExitOk : kExitVerifyFail;
}

int run_enclosing_ball(const std::string& scenario_path) {
  const bsloc::ValidatedScenario s = load_validated(scenario_path);
  const std::vector<bsloc::Vec> points = s.positions();
  bsloc::EnclosingBall ball = bsloc::min_enclosing_ball(points);
  std::cout << bsloc::ball_to_json(ball);
  return kExitOk;
}

int run_sweep(const std::string& scenario_path, const std::vector<double>& nu_list,
              const std::string& out_path) {
  for (double nu : nu_list) {
    if (!(nu >= 1.0))
      throw bsloc::ContractError("sweep: every exponent must be >= 1 (got " + fmt(nu) + ")");
  }
  const bsloc::Scenario base = bsloc::load_scenario(scenario_path);

  std::ostringstream csv;
  csv << "nu";
  for (int i = 1; i <= base.dimension; ++i) csv << ",c_star_" << i;
  csv << ",total_power_w,iterations\n";

  bool all_converged = true;
  for (double nu : nu_list) {
    bsloc::Scenario entry = base;
    for (bsloc::UserSpec& user : entry.users) user.nu = nu;
    const bsloc::ValidatedScenario s = bsloc::validate(std::move(entry));
    const bsloc::SolveReport report = bsloc::solve_scenario(s);
    all_converged = all_converged && report.converged && report.certificate.passed;
    csv << fmt(nu);
    for (int i = 0; i < s.dimension(); ++i) csv << "," << fmt(report.c_star[i]);
    csv << "," << fmt(report.total_power) << "," << report.iterations << "\n";
  }
  write_output(out_path, csv.str());
  return all_converged ? kExitOk : kExitUnconverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmit-power-optimal base station placement"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string method_name = "auto";
  std::string out_path;
  std::string point_text;
  std::vector<double> nu_list;
  double tol = bsloc::SolverOptions{}.tol_grad;
  int max_iters = bsloc::SolverOptions{}.max_iters;

  CLI::App* solve = app.add_subcommand("solve", "Solve a scenario and print the solution");
  solve->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  solve->add_option("--method", method_name, "Route selection")
      ->check(CLI::IsMember({"auto", "fixed-point", "closed-form"}))
      ->capture_default_str();
  solve->add_option("--tol", tol, "Relative stationarity tolerance")->capture_default_str();
  solve->add_option("--max-iters", max_iters, "Iteration budget")->capture_default_str();
  solve->add_option("--out", out_path, "Write the solution here instead of stdout");

  CLI::App* verify = app.add_subcommand("verify", "Check optimality of a candidate point");
  verify->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  verify->add_option("point", point_text, "Comma-separated coordinates")->required();

  CLI::App* ball =
      app.add_subcommand("enclosing-ball", "Smallest ball containing the user locations");
  ball->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "Re-solve with each exponent in a list; emit CSV");
  sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--nu-list", nu_list, "Comma-separated pathloss exponents")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_path, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) return run_solve(scenario_path, method_name, tol, max_iters, out_path);
    if (verify->parsed()) return run_verify(scenario_path, point_text);
    if (ball->parsed()) return run_enclosing_ball(scenario_path);
    if (sweep->parsed()) return run_sweep(scenario_path, nu_list, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
