#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace squeezelab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-domain input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quantity that does not exist at the requested point (Q at zero mean
/// photon number, x = M/L at L = 0, divergent moments).
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// A Fock-space truncation could not reach the requested accuracy.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double achieved_bound, std::size_t suggested_dim = 0)
        : Error(what), achieved_bound_(achieved_bound), suggested_dim_(suggested_dim) {}

    double achieved_bound() const noexcept { return achieved_bound_; }
    /// Zero when no larger dimension would help.
    std::size_t suggested_dim() const noexcept { return suggested_dim_; }

private:
    double achieved_bound_;
    std::size_t suggested_dim_;
};

}  // namespace squeezelab
