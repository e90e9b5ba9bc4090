#pragma once

#include <stdexcept>
#include <string>

namespace cek {

// Caller handed us something invalid (bad vertex id, malformed request).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Attempt to toggle a pair whose weight is +inf.
struct ForbiddenEditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input exceeds a hard size guard (e.g. brute-force enumeration limit).
struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal invariant broken; indicates a driver bug, not bad input.
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

}  // namespace cek
