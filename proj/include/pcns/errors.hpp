#pragma once

#include <stdexcept>
#include <string>

namespace pcns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed field (non-finite samples, bad exponent, grid mismatch).
class InputError : public Error {
public:
    using Error::Error;
};

/// Density dropped to or below the positivity floor during integration.
class PositivityError : public Error {
public:
    PositivityError(double t, double min_rho)
        : Error("density floor breached at t=" + std::to_string(t) +
                " (min rho=" + std::to_string(min_rho) + ")"),
          time(t), min_rho(min_rho) {}
    double time;
    double min_rho;
};

/// Non-finite value appeared in the integrated state.
class NonFiniteError : public Error {
public:
    explicit NonFiniteError(double t)
        : Error("non-finite state at t=" + std::to_string(t)), time(t) {}
    double time;
};

/// Configuration file problem; carries the offending line (0 if not line-specific).
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line(line) {}
    int line;
};

} // namespace pcns
