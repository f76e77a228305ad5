#pragma once

#include <stdexcept>
#include <string>

namespace decolab {

// Bad input: violated precondition, malformed config, out-of-domain argument.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested size exceeds a configured capacity (Hilbert-space dimension, atom count, ...).
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

// An iterative scheme ran out of budget before meeting its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data does not cover the range an operation needs (e.g. curve shorter than tau_max).
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

}  // namespace decolab
