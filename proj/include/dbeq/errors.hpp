#pragma once

#include <stdexcept>
#include <string>

namespace dbeq {

// Input violated a documented shape or value precondition.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The request is well-formed but outside what this implementation can
// answer exactly (e.g. coupled belief sets with three or more opponents).
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A game document could not be parsed into a Game.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solver failed to reach its tolerance within its budget.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dbeq
