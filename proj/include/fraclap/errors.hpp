#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

// Every failure raised by the library derives from Error. The subclasses
// partition failures into "the request was invalid" (parameter-like) and
// "the numerics could not deliver" (numerical-like); the CLI maps the two
// families onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid request: bad argument, unsupported configuration, etc.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function (e.g. Γ at x <= 0).
class DomainError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Operation undefined for the (N, s) regime, e.g. b_{N,s} when N <= 2s.
class RegimeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Point expected on the boundary (or inside) is not.
class GeometryError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Feature not provided for this dimension / domain kind.
class CapabilityError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Evaluation at a kernel singularity.
class SingularityError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Numerical failure: quadrature, extrapolation or iteration did not converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace fraclap
