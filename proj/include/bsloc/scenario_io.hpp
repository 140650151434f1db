#pragma once

#include <string>

#include "bsloc/driver.hpp"

namespace bsloc {

/// Parses a scenario document.  The schema is strict: unknown keys are
/// rejected with an error naming the key, every user carries `position`,
/// `nu`, and exactly one of `beta` or a `link` budget (which is compiled
/// to beta here), and constraints are `{center, radius}` objects.
/// Throws ValidationError with line/column context on malformed JSON.
/// The result still has to go through validate().
Scenario scenario_from_json(const std::string& text);

/// scenario_from_json over the contents of `path`.
Scenario load_scenario(const std::string& path);

/// Serializes a solve report with a fixed field order and 17 significant
/// digits, so identical runs produce byte-identical output.
std::string solution_to_json(const SolveReport& report);

/// Serializes a certificate, optionally extended with a convex-hull
/// membership section.
std::string kkt_report_to_json(const KktReport& report,
                               const HullCertificate* hull = nullptr);

/// Serializes an enclosing ball as {"center": [...], "radius": r}.
std::string ball_to_json(const EnclosingBall& ball);

}  // namespace bsloc
