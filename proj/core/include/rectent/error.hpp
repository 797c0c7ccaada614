#pragma once

#include <stdexcept>
#include <string>

namespace rectent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a precondition (bad dimension, empty input, unknown name).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A catalog string could not be parsed.
class CatalogError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A point was evaluated outside the domain of a chart or density.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Jacobian or tangent frame vanished where a nonzero one was required.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// The requested configuration exists mathematically but is not implemented.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// An integral or root search did not reach its tolerance within budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double residual)
        : Error(what + " (best estimate " + std::to_string(best_estimate) + ", residual " +
                std::to_string(residual) + ")"),
          best_estimate_(best_estimate),
          residual_(residual) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double best_estimate_;
    double residual_;
};

/// A computed quantity violated an identity or bound that must hold.
class BoundViolation : public Error {
public:
    using Error::Error;
};

}  // namespace rectent
