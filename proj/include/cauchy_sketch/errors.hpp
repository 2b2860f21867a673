#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cauchy_sketch {

/// Shape or length mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid argument value (empty input, negative weight, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerically rank-deficient input. `column()` is the first offending column
/// (or row, for row-selection failures).
class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Loss of positive definiteness, non-finite intermediate values, or a solver
/// that failed to converge within its guard.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied precondition turned out to be false at run time
/// (bad separation oracle, bad rounding factor, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace cauchy_sketch
