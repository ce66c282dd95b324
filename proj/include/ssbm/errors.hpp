#pragma once

#include <stdexcept>
#include <string>

namespace ssbm {

// Invalid parameters, malformed instances, bad configs. CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / parse-from-disk failures. CLI exit code 3.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Refusal to run past a hard size cap (exact enumeration). CLI exit code 4.
struct SizeCapError : std::runtime_error {
    explicit SizeCapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ssbm
