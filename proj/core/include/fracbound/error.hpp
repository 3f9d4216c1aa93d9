#pragma once

#include <stdexcept>
#include <string>

namespace fracbound {

/// Argument outside the mathematical domain of an operation (t <= 0, beta
/// outside (0,1), point outside the box, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature stopped before reaching the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what), achieved_(achieved), requested_(requested) {}

    double achieved() const noexcept { return achieved_; }
    double requested() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

/// The operation is defined, but not for this kind of input (e.g. the
/// density-case constant C on an atoms-only measure).
class UnsupportedCase : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A simulated subordinator path never crossed the requested level.
class InsufficientHorizon : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// h(t, lambda_n) could not be evaluated while assembling a series solution.
class KernelError : public std::runtime_error {
public:
    KernelError(const std::string& what, double lambda) : std::runtime_error(what), lambda_(lambda) {}

    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

}  // namespace fracbound
