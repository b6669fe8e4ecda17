#pragma once
#include <stdexcept>
#include <string>

namespace flatcal {

// Violated precondition / malformed input. Message names the offending field.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure (non-convergence, near-singular solve, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flatcal
