#pragma once

#include <stdexcept>
#include <string>

namespace relkit {

/// Base class for every error raised by relkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (manifest, prediction CSV, embedding binary, PNG).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or argument.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// A generator could not satisfy its constraints (rejection exhaustion, unachievable quota).
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Input that violates an operation's precondition (dimension mismatch, single class, ...).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace relkit
