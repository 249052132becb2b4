#pragma once

#include <stdexcept>
#include <string>

namespace singseries {

// Invalid user-supplied configuration or argument. CLI exit code 2.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation would exceed a hard budget (sieve range, tuple enumeration,
// pattern length). The message names the limiting parameter. CLI exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace singseries
