#pragma once

#include <stdexcept>
#include <string>

namespace qspect {

/// Bad argument values, dimension mismatches, malformed gate specs.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested problem size exceeds a hard capacity limit.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Text input failed to parse; carries the 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    int line_number;
};

/// Numerical breakdown (singular solve, eigensolver non-convergence, NaNs).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A bounded randomized search ran out of attempts.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent or unachievable configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File I/O failure; message names the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qspect
