#pragma once

#include <stdexcept>
#include <string>

namespace cltlab {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A size/enumeration cap was exceeded.
class SizeError : public Error {
public:
    using Error::Error;
};

/// The model itself is invalid (non-stochastic matrix, coefficients not summable, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

/// The requested representation does not exist (e.g. unit-circle root).
class ExistenceError : public ModelError {
public:
    using ModelError::ModelError;
};

/// Numerical noise exceeded its documented floor.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Bad or incomplete configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace cltlab
