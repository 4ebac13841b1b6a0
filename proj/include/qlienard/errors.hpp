#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qlienard {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Leading coefficient is zero, or the degree is outside the supported range.
class DegenerateDegreeError : public Error {
public:
    using Error::Error;
};

/// A configuration document violates the run schema. `path` names the
/// offending key, e.g. "spec.coeffs[2]".
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path))
    {
    }

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// The integrated state left the finite region (|state| > 1e12 or NaN).
class BlowUpError : public Error {
public:
    BlowUpError(std::size_t step, double time, const std::string& message)
        : Error(message), step_(step), time_(time)
    {
    }

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// Not enough samples or ensemble members for a statistical estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

} // namespace qlienard
