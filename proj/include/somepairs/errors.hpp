#pragma once

#include <stdexcept>
#include <string>

namespace somepairs {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A generator parameter exceeds the supported size range.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

// The request cannot be satisfied at all (e.g. more distinct edges than pairs exist).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Malformed input file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

// An index is outside the declared side sizes.
class RangeError : public Error {
public:
    using Error::Error;
};

// An operation's stated precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// An enumeration would exceed the configured budget. Carries the budget that
// would be required to run it.
class BudgetError : public Error {
public:
    BudgetError(const std::string& msg, long long required)
        : Error(msg), required_(required) {}

    long long required() const noexcept { return required_; }

private:
    long long required_;
};

// A partition strategy failed to shrink a subproblem.
class NonProgressError : public Error {
public:
    using Error::Error;
};

// An internally impossible state, e.g. an edge that no subset pair covers.
class ContradictionError : public Error {
public:
    using Error::Error;
};

}  // namespace somepairs
