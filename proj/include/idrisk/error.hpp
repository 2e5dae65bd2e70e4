#pragma once

#include <stdexcept>
#include <string>

namespace idrisk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation, or a theorem's
/// precondition does not hold. The CLI maps this family to exit status 2.
class DomainError : public Error {
public:
    using Error::Error;
};

/// s lies beyond the range of tau on its domain.
class RangeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The requested bound needs a property the measure lacks (e.g. bounded support).
class InapplicableBound : public DomainError {
public:
    using DomainError::DomainError;
};

/// The operation is not defined for this kind of measure (e.g. sampling an
/// infinite-activity measure).
class UnsupportedOperation : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed configuration document. The message names the offending key.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// File could not be read or written. Exit status 3 in the CLI.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace idrisk
