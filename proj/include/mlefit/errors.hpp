#pragma once

#include <stdexcept>
#include <string>

namespace mlefit {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iterative procedure (series, root finder, minimizer) failed its stopping rule.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bracketing function has no sign change on the search interval.
class NoRootError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

} // namespace mlefit
