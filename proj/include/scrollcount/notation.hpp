#pragma once

#include <string>

#include "scrollcount/dimensions.hpp"

namespace scrollcount {

// The compact text form of a characteristic-number problem:
//
//   n(N;k,l;a_0,a_1,...,a_r)
//
// meaning: scrolls S_{k,l} in P^N meeting a_j general linear subspaces of
// dimension j, for each j. Whitespace is permitted around numbers and
// punctuation.

// Parses the notation. Malformed text throws InvalidConditionError with the
// character position of the offending token; a well-formed problem whose
// condition dimensions do not cut the scroll family down to points throws
// DimensionError stating the expected condition sum.
IncidenceProblem parse_problem(const std::string& text);

// Renders the canonical text form (counts padded through dimension N-3, the
// deepest non-vacuous condition). parse_problem(render_problem(p)) == p.
std::string render_problem(const IncidenceProblem& problem);

} // namespace scrollcount
