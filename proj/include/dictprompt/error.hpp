#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dictprompt {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(what + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Malformed input data. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A caller violated an operation's precondition (bad argument, bad configuration).
class ContractError : public Error {
public:
    using Error::Error;
};

} // namespace dictprompt
