#pragma once

#include <stdexcept>
#include <string>

namespace rigidsphere {

// Malformed series operations: incompatible variable sets, unknown
// variables, non-invertible constant terms.
class SeriesError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameter values outside an operation's domain (c = 0, poles, degenerate
// Levi form).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iterative solvers that did not reach their tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rigidsphere
