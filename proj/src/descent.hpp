#pragma once

#include "bsloc/model.hpp"

namespace bsloc {

// Objective change f(to) - f(from), term by term, so its sign stays
// trustworthy long after f(to) and f(from) agree in every printed digit.
// Shared by the unconstrained and constrained descent loops.
double objective_delta(const Vec& from, const Vec& to, const ValidatedScenario& s);

}  // namespace bsloc
