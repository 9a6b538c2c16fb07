#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace few {

// Base for all library errors so callers can catch the family at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problems with input files or their contents (missing file, bad cell, absent
// target column). The CLI maps these to exit code 2.
struct DataError : Error {
    using Error::Error;
};

// Matrix/vector dimensions do not line up with what a model or pipeline expects.
struct ShapeError : Error {
    using Error::Error;
};

// The label vector cannot support the requested computation (single class,
// constant target under R², ...).
struct DegenerateTargetError : Error {
    using Error::Error;
};

// A requested combination is defined to be invalid (per-case errors for the
// Fisher criterion, epsilon-lexicase without per-case errors, ...).
struct UnsupportedError : Error {
    using Error::Error;
};

// Malformed s-expression text; `position` is the byte offset of the problem.
struct ParseError : Error {
    ParseError(const std::string& message, std::size_t pos)
        : Error(message + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

// Harness-level failure, e.g. every grid combination failed to fit.
struct HarnessError : Error {
    using Error::Error;
};

}  // namespace few
