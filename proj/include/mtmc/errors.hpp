#pragma once

#include <stdexcept>
#include <string>

namespace mtmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data: malformed rows, broken invariants, unknown cameras.
struct ValidationError : Error {
    using Error::Error;
};

// Malformed file content; the message carries the 1-based line number.
struct ParseError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Homogeneous divide where |w| falls below tolerance.
struct DegenerateProjectionError : ValidationError {
    using ValidationError::ValidationError;
};

// A score whose denominator is structurally zero (e.g. MOTA with no truth).
struct UndefinedMeasureError : ValidationError {
    using ValidationError::ValidationError;
};

} // namespace mtmc
