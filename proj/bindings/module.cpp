#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bsloc/scenario_io.hpp"

namespace py = pybind11;

namespace {

bsloc::ValidatedScenario scenario_from_text(const std::string& text) {
  return bsloc::validate(bsloc::scenario_from_json(text));
}

std::vector<double> to_vector(const bsloc::Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

bsloc::Vec point_arg(const std::vector<double>& point, const bsloc::ValidatedScenario& s) {
  if (point.size() != static_cast<std::size_t>(s.dimension()))
    throw bsloc::ContractError("point length must equal the scenario dimension");
  bsloc::Vec out(s.dimension());
  for (int i = 0; i < s.dimension(); ++i) out[i] = point[static_cast<std::size_t>(i)];
  return out;
}

py::dict certificate_dict(const bsloc::KktReport& report) {
  py::dict out;
  out["stationarity_residual"] = report.stationarity_residual;
  out["lambda"] = report.lambda;
  out["complementary_slackness_max"] = report.complementary_slackness_max;
  out["primal_feasibility_ok"] = report.primal_feasibility_ok;
  if (report.subgradient_case) {
    py::dict sub;
    sub["user_index"] = report.subgradient_case->user_index;
    sub["optimal"] = report.subgradient_case->optimal;
    out["subgradient_case"] = sub;
  } else {
    out["subgradient_case"] = py::none();
  }
  out["passed"] = report.passed;
  return out;
}

bsloc::Method method_from_name(const std::string& name) {
  if (name == "auto") return bsloc::Method::kAuto;
  if (name == "fixed-point") return bsloc::Method::kFixedPoint;
  if (name == "closed-form") return bsloc::Method::kClosedForm;
  throw bsloc::ContractError("method must be 'auto', 'fixed-point', or 'closed-form'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Power-optimal transmitter placement (C++ core)";

  // Malformed input is a ValueError on the Python side, whatever C++ base
  // class the validation machinery uses internally.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const bsloc::ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "solve",
      [](const std::string& scenario_json, const std::string& method, double tol,
         int max_iters) {
        const bsloc::ValidatedScenario s = scenario_from_text(scenario_json);
        bsloc::SolverOptions options;
        options.tol_grad = tol;
        options.max_iters = max_iters;
        const bsloc::SolveReport report =
            bsloc::solve_scenario(s, method_from_name(method), options);
        py::dict out;
        out["c_star"] = to_vector(report.c_star);
        out["total_power_w"] = report.total_power;
        out["per_user_power_w"] = report.per_user_power;
        out["theta"] = report.theta;
        if (report.constrained) out["mu"] = report.mu;
        out["certificate"] = certificate_dict(report.certificate);
        out["method"] = bsloc::route_name(report.method);
        out["iterations"] = report.iterations;
        out["converged"] = report.converged;
        return out;
      },
      py::arg("scenario_json"), py::arg("method") = "auto", py::arg("tol") = 1e-10,
      py::arg("max_iters") = 10000,
      "Solve a scenario given as a JSON document; mirrors the CLI solve output.");

  m.def(
      "verify",
      [](const std::string& scenario_json, const std::vector<double>& point, double tol) {
        const bsloc::ValidatedScenario s = scenario_from_text(scenario_json);
        const bsloc::VerifyReport report = bsloc::verify_point(point_arg(point, s), s, tol);
        py::dict out = certificate_dict(report.kkt);
        py::dict hull;
        hull["member"] = report.hull.member;
        hull["coefficients"] = report.hull.coefficients;
        hull["residual"] = report.hull.residual;
        out["hull"] = hull;
        return out;
      },
      py::arg("scenario_json"), py::arg("point"), py::arg("tol") = 1e-8,
      "Optimality certificate for a candidate point, with hull membership.");

  m.def(
      "objective",
      [](const std::string& scenario_json, const std::vector<double>& point) {
        const bsloc::ValidatedScenario s = scenario_from_text(scenario_json);
        return bsloc::objective(point_arg(point, s), s);
      },
      py::arg("scenario_json"), py::arg("point"),
      "Total transmit power at a candidate location.");

  m.def(
      "enclosing_ball",
      [](const std::string& scenario_json) {
        const bsloc::ValidatedScenario s = scenario_from_text(scenario_json);
        const bsloc::EnclosingBall ball = bsloc::min_enclosing_ball(s.positions());
        py::dict out;
        out["center"] = to_vector(ball.center);
        out["radius"] = ball.radius;
        return out;
      },
      py::arg("scenario_json"),
      "Smallest ball containing the user locations; its center is the large-exponent optimum.");
}
