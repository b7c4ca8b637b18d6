#pragma once

#include <stdexcept>
#include <string>

namespace catlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The normal-graph chart |phi| < <y>^2 is violated (or its safety margin is).
class RegularityViolation : public Error {
public:
    RegularityViolation(double y, double phi, const std::string& what)
        : Error(what), y_(y), phi_(phi) {}
    double y() const noexcept { return y_; }
    double phi() const noexcept { return phi_; }

private:
    double y_;
    double phi_;
};

/// The coefficient of phi_tt dropped below the hyperbolicity floor, or the
/// induced metric stopped being Lorentzian.
class HyperbolicityLoss : public Error {
public:
    HyperbolicityLoss(double y, double coefficient, const std::string& what)
        : Error(what), y_(y), coefficient_(coefficient) {}
    double y() const noexcept { return y_; }
    double coefficient() const noexcept { return coefficient_; }

private:
    double y_;
    double coefficient_;
};

/// K = B^2 (1 - phi_t^2) + phi_y^2 <= 0: the Lagrangian density is not real.
class NonLorentzianState : public Error {
public:
    using Error::Error;
};

/// Eigen-solver outcomes that invalidate the discretization.
class SpectralError : public Error {
public:
    enum class Kind { DomainTooSmall, Discretization, NoConvergence };
    SpectralError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Raised by the collapsing-cylinder integrator when R reaches zero.
class CollapseSignal : public Error {
public:
    using Error::Error;
};

/// A least-squares fit was requested on data it cannot describe.
class FitUndefined : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or command-line usage.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace catlab
