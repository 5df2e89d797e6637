#pragma once

#include <stdexcept>
#include <string>

namespace riskest {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Violated precondition or domain contract (bad level, negative effort, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error(message) {}
};

/// Malformed or inconsistent external data (CSV cells, model files, ...).
/// Messages carry the offending location when one is known.
class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(message) {}
};

} // namespace riskest
