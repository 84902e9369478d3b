#pragma once

#include <stdexcept>
#include <string>

namespace duonet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes or lengths do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A complex value expected to be real carries an imaginary residue.
class NonRealError : public Error {
public:
    NonRealError(const std::string& what, double max_imag)
        : Error(what), max_imag_(max_imag) {}
    double max_imag() const noexcept { return max_imag_; }

private:
    double max_imag_;
};

/// Invalid model, optimizer or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite loss, gradient or update.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (CSV, config). Carries the offending line, 0 if unknown.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Checkpoint magic or version does not match.
class VersionError : public Error {
public:
    using Error::Error;
};

/// Checkpoint ended before all declared sections were read.
class TruncatedError : public Error {
public:
    using Error::Error;
};

/// Signal too short for the requested windowing.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Target has zero variance, so normalized metrics are undefined.
class DegenerateTargetError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace duonet
