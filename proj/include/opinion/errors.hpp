#pragma once

#include <stdexcept>
#include <string>

namespace opinion {

// Bad input: malformed files, violated preconditions, out-of-range arguments.
// The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical or structural failure detected during computation
// (singular matrix, non-simple null space, divergent integration, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace opinion
