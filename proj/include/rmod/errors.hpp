#pragma once

#include <stdexcept>

namespace rmod {

// Bad arguments, bad configs, violated preconditions. CLI exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// File I/O and format problems. CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Calibration cannot produce a usable profile. CLI exit code 3.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An all-zero (or otherwise zero-mean-envelope) signal. Batch classification
// maps this to an Unknown decision instead of propagating it.
struct DegenerateSignalError : ValidationError {
    using ValidationError::ValidationError;
};

// R value and profile disagree on the extraction method.
struct MethodMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

} // namespace rmod
