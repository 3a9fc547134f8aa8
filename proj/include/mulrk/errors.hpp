#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mulrk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised where the multiplicative representation is undefined (the point 0+0i)
/// or a stage evaluation produced a non-finite value. Carries the abscissa of
/// the failing step when known.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, std::optional<double> x = std::nullopt)
        : Error(what), x_(x) {}

    [[nodiscard]] std::optional<double> x() const noexcept { return x_; }

private:
    std::optional<double> x_;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class StepCountError : public Error {
public:
    using Error::Error;
};

class UnrecoverableZero : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

} // namespace mulrk
