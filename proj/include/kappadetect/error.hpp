#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kappadetect {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point cloud had too few points for the requested operation.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Every candidate secant was discarded, or an empty secant set was supplied.
class DegenerateSecantSetError : public Error {
public:
    using Error::Error;
};

/// A target dimension fell outside [1, n], or a dimension range was malformed.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Orthonormalization met a numerically rank-deficient matrix.
class RankError : public Error {
public:
    using Error::Error;
};

/// Two inputs that must agree (ambient dimension, profile dims) do not.
class IncompatibleError : public Error {
public:
    using Error::Error;
};

class InsufficientRareClassError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment or command configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Inconsistent column counts or a schema that does not fit the file.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A row that could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace kappadetect
