#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eegdist {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed text input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Bitstream that fails structural checks (bad magic, count mismatch, truncation).
class CorruptBlock : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    RankDeficient(const std::string& column)
        : Error("design matrix is rank deficient at column '" + column + "'"), column_(column) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

} // namespace eegdist
