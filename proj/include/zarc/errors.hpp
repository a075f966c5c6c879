#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace zarc {

// Error taxonomy shared by the library and the CLI driver.
// The CLI maps these onto process exit codes:
//   ValidationError -> 2, NumericError -> 3, IoError -> 4.

// A caller-supplied parameter violates a documented precondition.
// The message names the violated precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric routine failed to converge or an internal consistency
// cross-check (two independent evaluation routes) disagreed.
// Carries the partial result and the tolerance actually achieved,
// when those are meaningful.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what,
                          double partial = std::numeric_limits<double>::quiet_NaN(),
                          double achieved = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(what), partial_result(partial), achieved_tolerance(achieved) {}

    double partial_result;
    double achieved_tolerance;
};

// Filesystem / serialization failure; message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace zarc
