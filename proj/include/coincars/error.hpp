#pragma once

#include <stdexcept>
#include <string>

namespace coincars {

/// Numerical-domain violation: bad grid, insufficient coverage, degenerate input.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Schema or value problem in a scenario configuration or input file.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coincars
