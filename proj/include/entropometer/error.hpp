#pragma once

#include <stdexcept>
#include <string>

namespace entropometer {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or command-line value.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A spectrum, state or graph that breaks its invariants.
class InvalidModel : public Error {
public:
    using Error::Error;
};

/// Argument outside an operation's domain (beta <= 0, energy outside the
/// admissible window, ...). `bound()` names the violated bound.
class DomainError : public Error {
public:
    enum class Bound { lower, upper, other };

    DomainError(const std::string& what, Bound bound)
        : Error(what), bound_(bound) {}

    Bound bound() const noexcept { return bound_; }

private:
    Bound bound_;
};

/// Requested entropy change not attainable by a finite spectrum. Carries the
/// attainable open interval so callers can clip grids.
class RangeError : public Error {
public:
    RangeError(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}

    double attainable_lo() const noexcept { return lo_; }
    double attainable_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

/// Iterative solver or quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// An accessibility graph that contradicts entropy non-decrease.
class InconsistentGraph : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace entropometer
