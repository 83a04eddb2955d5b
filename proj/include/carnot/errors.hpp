#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Base class of every exception thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter fell outside the supported range.
struct bounds_error : error {
    using error::error;
};

/// Values built over different bases, groups or spaces were combined.
struct mismatch_error : error {
    using error::error;
};

/// A value violates a documented precondition (wrong layer, zero denominator, ...).
struct domain_error : error {
    using error::error;
};

/// The requested feature combination is not available.
struct unsupported_error : error {
    using error::error;
};

/// Malformed text input (descriptor files, expressions). Carries the offset
/// of the offending character.
struct parse_error : error {
    parse_error(const std::string& message, std::size_t where)
        : error(message + " (at position " + std::to_string(where) + ")"), position(where) {}
    std::size_t position;
};

} // namespace carnot
