#pragma once

#include <stdexcept>
#include <string>

namespace ouha {

// Precondition violations (bad t, degree out of range, nonzero mean, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A quadrature or refinement loop hit its doubling budget without meeting
// the requested tolerance.  The CLI maps this family to exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The final exponential of a log-domain quantity would not fit in a double.
class OverflowError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

// Truncating an infinite dt/t range failed: the profile exceeded its
// declared magnitude bound on the truncated tail.
class TailBoundError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

}  // namespace ouha
