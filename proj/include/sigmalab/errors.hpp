#pragma once

#include <stdexcept>
#include <string>

namespace sigmalab {

// Invalid input: malformed clocks, operators, parameters outside their domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Configuration rejected before any computation; carries the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A numerical safeguard tripped (CFL, non-finite state, failed solve).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sigmalab
