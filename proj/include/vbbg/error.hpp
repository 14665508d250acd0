#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vbbg {

/// Caller supplied data that violates an operation's preconditions.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite quantity it cannot recover from.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    /// Sample (or pixel) index at which the failure was detected.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Malformed file content. `offset()` is the byte offset of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Filesystem failures: missing inputs, unwritable outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vbbg
