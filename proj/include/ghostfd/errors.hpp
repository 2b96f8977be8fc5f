#pragma once

#include <stdexcept>
#include <string>

namespace ghostfd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the admissible parameter set (negative vol, unsorted breakpoints, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The barrier sits at or below S_1, leaving no interior PDE row.
class BarrierBelowFirstCell : public Error {
public:
    using Error::Error;
};

/// A tridiagonal pivot fell below the breakdown floor.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, std::size_t row)
        : Error(what), row_(row) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A closed-form stability formula was asked for outside its hypotheses (r_k < 0).
class AssumptionViolated : public Error {
public:
    using Error::Error;
};

/// Empirical threshold bracket does not straddle the stability boundary.
class BracketInvalid : public Error {
public:
    using Error::Error;
};

/// Price requested outside [S_0, S_M].
class OutOfDomain : public Error {
public:
    using Error::Error;
};

}  // namespace ghostfd
