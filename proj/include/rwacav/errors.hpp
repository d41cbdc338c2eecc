#pragma once

#include <stdexcept>
#include <string>

namespace rwacav {

/// Invalid configuration or precondition violation supplied by the caller.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what, std::string key = {})
        : std::invalid_argument(what), key_(std::move(key)) {}

    /// Offending config key, empty when the error is not tied to one.
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// State vector and mode set disagree on the number of field amplitudes.
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The integration produced a non-finite amplitude.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// A run was refused because its estimated cost exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run was stopped by an external cancellation request.
class Interrupted : public std::runtime_error {
public:
    explicit Interrupted(double t)
        : std::runtime_error("interrupted"), time_(t) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace rwacav
