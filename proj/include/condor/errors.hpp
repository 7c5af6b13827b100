#pragma once

#include <stdexcept>
#include <string>

namespace condor {

// Bad arguments or a violated call contract. CLI maps this to exit 1.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable, malformed, or inconsistent input data. CLI maps this to exit 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace condor
