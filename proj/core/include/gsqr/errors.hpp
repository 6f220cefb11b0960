#pragma once

#include <stdexcept>
#include <string>

namespace gsqr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatches, bad parameters, parse failures.
class InputError : public Error {
public:
    using Error::Error;
};

/// A residual is exactly zero at beta = 0, so the initial sign pattern of w
/// is undefined. Jittering the response fixes it.
class ZeroResidualAtStartError : public InputError {
public:
    using InputError::InputError;
};

/// Two path events fall on the same breakpoint (one-at-a-time violation).
class TieBreakError : public Error {
public:
    using Error::Error;
};

/// A step-1 or step-3 linear system has a pivot below the relative threshold.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

}  // namespace gsqr
