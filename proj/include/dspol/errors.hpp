#pragma once

#include <stdexcept>
#include <string>

namespace dspol {

/// Rejected input: non-finite values, out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A formula was evaluated outside its domain (negative radicand, undefined threshold, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive integration could not proceed.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " at t = " + std::to_string(time) + " ps"), time_(time)
    {
    }

    double time() const noexcept { return time_; }

private:
    double time_;
};

namespace detail {

inline void require(bool cond, const char* msg)
{
    if (!cond) {
        throw InvalidArgument(msg);
    }
}

} // namespace detail

} // namespace dspol
