#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imagearc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the domain of a metric or a map.
class DomainError : public Error {
public:
    using Error::Error;
};

/// f(z) lies outside the target metric's domain.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A map cannot be evaluated at a point (essential singularity, overflow,
/// composition through infinity).
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// 0/0 in a quotient.
class IndeterminateError : public EvaluationError {
public:
    using EvaluationError::EvaluationError;
};

/// Invalid arguments to a constructor (degenerate Möbius, divergent
/// Blaschke condition, bad truncation request).
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Composition of maps whose codomain/domain tags disagree.
class CompositionError : public Error {
public:
    using Error::Error;
};

/// Quadrature or series failed to reach tolerance; carries the best estimate.
class PrecisionError : public Error {
public:
    PrecisionError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// An improper area integral does not settle.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_value)
        : Error(what), last_value_(last_value) {}
    double last_value() const noexcept { return last_value_; }

private:
    double last_value_;
};

/// Zeros or poles on (or numerically near) the unit circle.
class BoundarySingularityError : public Error {
public:
    using Error::Error;
};

/// f(0) is 0 or infinity where a normalized chordal ratio is needed.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Discretization is too coarse (Fourier tail, truncation tail).
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Zeros/poles cannot be extracted structurally from an expression.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed function-spec text.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected, std::string found)
        : Error("parse error at byte " + std::to_string(position) + ": expected " + expected +
                ", found " + found),
          position_(position), expected_(std::move(expected)), found_(std::move(found)) {}

    std::size_t position() const noexcept { return position_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t position_;
    std::string expected_;
    std::string found_;
};

}  // namespace imagearc
