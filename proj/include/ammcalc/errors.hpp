#pragma once

#include <stdexcept>
#include <string>

namespace ammcalc {

/// Base class for every error raised by the library.
class AmmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation requested outside a curve's open domain.
class DomainError : public AmmError {
public:
    using AmmError::AmmError;
};

/// A value lies outside the sampled range of a monotone map (e.g. numeric inverse).
class RangeError : public AmmError {
public:
    using AmmError::AmmError;
};

/// The curve cannot express the requested exchange rate.
class ExpressivityError : public AmmError {
public:
    using AmmError::AmmError;
};

/// Malformed or inconsistent arguments.
class ArgumentError : public AmmError {
public:
    using AmmError::AmmError;
};

/// Composition law preconditions could not be established.
class StagingError : public AmmError {
public:
    using AmmError::AmmError;
};

/// A curve replacement breaks reserve or rate preservation.
class ReplacementRuleError : public AmmError {
public:
    ReplacementRuleError(std::string rule, const std::string& what)
        : AmmError(what), rule_(std::move(rule)) {}
    const std::string& rule() const noexcept { return rule_; }

private:
    std::string rule_;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public AmmError {
public:
    QuadratureError(double value, double error_estimate, const std::string& what)
        : AmmError(what), value_(value), error_(error_estimate) {}
    double value() const noexcept { return value_; }
    double error_estimate() const noexcept { return error_; }

private:
    double value_;
    double error_;
};

/// Malformed JSON curve/composition/partition spec.
class SpecError : public AmmError {
public:
    using AmmError::AmmError;
};

}  // namespace ammcalc
