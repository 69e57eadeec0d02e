#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prepress {

/// Input outside an operation's mathematical domain (bad ranges, empty inputs).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A fixed-size container (IT8 vendor block) would overflow.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Malformed file content. `position()` is a byte offset for binary formats
/// and a 1-based line number for text formats; `kind()` tells which.
class ParseError : public std::runtime_error {
public:
    enum class Kind { ByteOffset, Line };

    ParseError(const std::string& message, Kind kind, std::size_t position)
        : std::runtime_error(message), kind_(kind), position_(position) {}

    static ParseError at_offset(std::size_t offset, const std::string& what) {
        return ParseError("byte " + std::to_string(offset) + ": " + what, Kind::ByteOffset, offset);
    }
    static ParseError at_line(std::size_t line, const std::string& what) {
        return ParseError("line " + std::to_string(line) + ": " + what, Kind::Line, line);
    }

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

}  // namespace prepress
