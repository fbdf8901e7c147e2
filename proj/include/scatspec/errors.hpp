#pragma once

#include <stdexcept>
#include <string>

namespace scatspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (e.g. r < r_min).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A mathematical hypothesis of an estimate is violated (e.g. s >= (n-2)/2).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or unknown configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The grid does not resolve a feature the computation depends on.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Iterative numerics failed (non-convergence, singular solve).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while writing artifacts.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace scatspec
