#pragma once

#include <stdexcept>
#include <string>

namespace ggm {

enum class ErrorKind {
    InvalidInput,
    NumericalError,
    ParseError,
    DegenerateInput,
    ConfigError,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure carrying a 1-based source location.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : Error(ErrorKind::ParseError, format(line, column, msg)),
          detail_(msg), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    /// Message without the location prefix.
    const std::string& detail() const noexcept { return detail_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, std::size_t column,
                              const std::string& msg) {
        return "line " + std::to_string(line) + ", column " +
               std::to_string(column) + ": " + msg;
    }

    std::string detail_;
    std::size_t line_;
    std::size_t column_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
    throw Error(ErrorKind::InvalidInput, msg);
}

[[noreturn]] inline void throw_numerical(const std::string& msg) {
    throw Error(ErrorKind::NumericalError, msg);
}

}  // namespace ggm
