#include "bsloc/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace bsloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, int index, const std::string& message) {
  throw ValidationError(field, index, message);
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

void check_keys(const json& obj, const std::string& where, int index,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where, index, "unknown key '" + it.key() + "'");
  }
}

double number_at(const json& obj, const char* key, const std::string& where, int index) {
  if (!obj.contains(key)) fail(where, index, std::string("missing required key '") + key + "'");
  const json& value = obj.at(key);
  if (!value.is_number()) fail(where, index, std::string("'") + key + "' must be a number");
  return value.get<double>();
}

Vec vector_at(const json& obj, const char* key, const std::string& where, int index) {
  if (!obj.contains(key)) fail(where, index, std::string("missing required key '") + key + "'");
  const json& value = obj.at(key);
  if (!value.is_array() || value.empty())
    fail(where, index, std::string("'") + key + "' must be a non-empty array of numbers");
  Vec out(static_cast<Eigen::Index>(value.size()));
  Eigen::Index i = 0;
  for (const json& entry : value) {
    if (!entry.is_number())
      fail(where, index, std::string("'") + key + "' must contain only numbers");
    out[i++] = entry.get<double>();
  }
  return out;
}

double beta_from_json_link(const json& link, int index) {
  if (!link.is_object()) fail("users", index, "'link' must be an object");
  check_keys(link, "link", index,
             {"rate_bps", "bandwidth_hz", "snr_gap", "noise_w", "alpha", "wavelength_m",
              "two_ray"});
  LinkBudget budget;
  budget.rate_bps = number_at(link, "rate_bps", "link", index);
  budget.bandwidth_hz = number_at(link, "bandwidth_hz", "link", index);
  if (link.contains("snr_gap")) budget.snr_gap = number_at(link, "snr_gap", "link", index);
  budget.noise_w = number_at(link, "noise_w", "link", index);

  const int propagation_keys = static_cast<int>(link.contains("alpha")) +
                               static_cast<int>(link.contains("wavelength_m")) +
                               static_cast<int>(link.contains("two_ray"));
  if (propagation_keys != 1)
    fail("link", index, "need exactly one of 'alpha', 'wavelength_m', or 'two_ray'");

  try {
    if (link.contains("alpha")) {
      budget.alpha = number_at(link, "alpha", "link", index);
    } else if (link.contains("wavelength_m")) {
      budget.alpha = alpha_free_space(number_at(link, "wavelength_m", "link", index));
    } else {
      const json& two_ray = link.at("two_ray");
      if (!two_ray.is_object()) fail("link", index, "'two_ray' must be an object");
      check_keys(two_ray, "two_ray", index, {"ht_m", "hr_m"});
      budget.alpha = alpha_two_ray(number_at(two_ray, "ht_m", "two_ray", index),
                                   number_at(two_ray, "hr_m", "two_ray", index));
    }
    return beta_from_link(budget);
  } catch (const ValidationError& e) {
    // Re-tag link-budget violations with the owning user's index.
    std::vector<Violation> tagged;
    for (const Violation& v : e.violations())
      tagged.push_back({"link." + v.field, v.index >= 0 ? v.index : index, v.message});
    throw ValidationError(std::move(tagged));
  }
}

UserSpec parse_user(const json& node, int index) {
  if (!node.is_object()) fail("users", index, "each user must be an object");
  check_keys(node, "users", index, {"position", "beta", "nu", "link"});
  UserSpec user;
  user.position = vector_at(node, "position", "users", index);
  user.nu = number_at(node, "nu", "users", index);
  const bool has_beta = node.contains("beta");
  const bool has_link = node.contains("link");
  if (has_beta == has_link)
    fail("users", index, "need exactly one of 'beta' or 'link'");
  user.beta = has_beta ? number_at(node, "beta", "users", index)
                       : beta_from_json_link(node.at("link"), index);
  return user;
}

Ball parse_ball(const json& node, int index) {
  if (!node.is_object()) fail("constraints", index, "each constraint must be an object");
  check_keys(node, "constraints", index, {"center", "radius"});
  Ball ball;
  ball.center = vector_at(node, "center", "constraints", index);
  ball.radius = number_at(node, "radius", "constraints", index);
  return ball;
}

std::string fmt(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string array_json(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(values[i]);
  }
  out += "]";
  return out;
}

std::string vec_json(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v[i]);
  }
  out += "]";
  return out;
}

std::string kkt_object(const KktReport& report, const HullCertificate* hull,
                       const std::string& pad) {
  const std::string inner = pad + "  ";
  std::string out = "{\n";
  out += inner + "\"stationarity_residual\": " + fmt(report.stationarity_residual) + ",\n";
  out += inner + "\"lambda\": " + array_json(report.lambda) + ",\n";
  out += inner + "\"complementary_slackness_max\": " +
         fmt(report.complementary_slackness_max) + ",\n";
  out += inner + "\"primal_feasibility_ok\": " +
         (report.primal_feasibility_ok ? "true" : "false") + ",\n";
  if (report.subgradient_case) {
    out += inner + "\"subgradient_case\": {\"user_index\": " +
           std::to_string(report.subgradient_case->user_index) +
           ", \"optimal\": " + (report.subgradient_case->optimal ? "true" : "false") + "},\n";
  } else {
    out += inner + "\"subgradient_case\": null,\n";
  }
  if (hull != nullptr) {
    out += inner + "\"hull\": {\"member\": " + (hull->member ? "true" : "false") +
           ", \"coefficients\": " + array_json(hull->coefficients) +
           ", \"residual\": " + fmt(hull->residual) + "},\n";
  }
  out += inner + "\"passed\": " + (report.passed ? "true" : "false") + "\n";
  out += pad + "}";
  return out;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("file", -1, "malformed JSON at " + locate(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) fail("file", -1, "top level must be a JSON object");
  check_keys(doc, "scenario", -1, {"dimension", "height", "users", "constraints"});

  Scenario scenario;
  if (!doc.contains("dimension")) fail("dimension", -1, "missing required key 'dimension'");
  if (!doc.at("dimension").is_number_integer())
    fail("dimension", -1, "must be an integer");
  scenario.dimension = doc.at("dimension").get<int>();

  if (doc.contains("height")) {
    if (!doc.at("height").is_number()) fail("height", -1, "must be a number");
    scenario.height = doc.at("height").get<double>();
  }

  if (!doc.contains("users") || !doc.at("users").is_array())
    fail("users", -1, "must be an array of user objects");
  int index = 0;
  for (const json& node : doc.at("users")) scenario.users.push_back(parse_user(node, index++));

  if (doc.contains("constraints")) {
    if (!doc.at("constraints").is_array())
      fail("constraints", -1, "must be an array of {center, radius} objects");
    index = 0;
    for (const json& node : doc.at("constraints"))
      scenario.constraints.push_back(parse_ball(node, index++));
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("file", -1, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json(buffer.str());
}

std::string solution_to_json(const SolveReport& report) {
  std::string out = "{\n";
  out += "  \"c_star\": " + vec_json(report.c_star) + ",\n";
  out += "  \"total_power_w\": " + fmt(report.total_power) + ",\n";
  out += "  \"per_user_power_w\": " + array_json(report.per_user_power) + ",\n";
  out += "  \"theta\": " + array_json(report.theta) + ",\n";
  if (report.constrained) out += "  \"mu\": " + array_json(report.mu) + ",\n";
  out += "  \"certificate\": " + kkt_object(report.certificate, nullptr, "  ") + ",\n";
  out += std::string("  \"method\": \"") + route_name(report.method) + "\",\n";
  out += "  \"iterations\": " + std::to_string(report.iterations) + "\n";
  out += "}\n";
  return out;
}

std::string kkt_report_to_json(const KktReport& report, const HullCertificate* hull) {
  return kkt_object(report, hull, "") + "\n";
}

std::string ball_to_json(const EnclosingBall& ball) {
  return "{\"center\": " + vec_json(ball.center) + ", \"radius\": " + fmt(ball.radius) +
         "}\n";
}

}  // namespace bsloc
