#pragma once

#include <stdexcept>
#include <string>

namespace fairtrade {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command-line usage or an invalid configuration value.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed or otherwise unusable input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// One of the two groups is empty, or the favored share is outside (0, 1).
class DegenerateGroupError : public DataError {
public:
    using DataError::DataError;
};

/// The labels contain only one class where both are required.
class DegenerateLabelsError : public DataError {
public:
    using DataError::DataError;
};

/// Gradient descent produced a non-finite loss; the step size is too large.
class DivergenceError : public DataError {
public:
    using DataError::DataError;
};

/// A requested target cannot be reached with the available counts.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

} // namespace fairtrade
