#pragma once

#include <stdexcept>
#include <string>

namespace dtc {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the documented domain (negative power, beta out of range, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// A covariance that should be invertible is singular (deterministic dependence).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

// An iterative routine (quadrature, sampling) failed to meet its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace dtc
