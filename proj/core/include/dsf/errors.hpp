#pragma once

#include <stdexcept>
#include <string>

namespace dsf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: parameters, config keys, grid settings.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a mathematical function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iteration, series or quadrature failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Quadrature refinement gave up; keeps the last two estimates.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double previous, double last)
        : NumericalError(what), previous_(previous), last_(last) {}
    double previous() const { return previous_; }
    double last() const { return last_; }

private:
    double previous_;
    double last_;
};

/// Time integrator broke an invariant (norm drift).
class IntegratorError : public NumericalError {
public:
    IntegratorError(const std::string& what, long step, double time)
        : NumericalError(what), step_(step), time_(time) {}
    long step() const { return step_; }
    double time() const { return time_; }

private:
    long step_;
    double time_;
};

/// Caller broke a documented precondition (e.g. history underrun).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Two independent evaluations of the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace dsf
