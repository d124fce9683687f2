#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlad {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid arguments or violated preconditions.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Raised when reading a malformed input file. Carries the source name and
/// 1-based line number (0 when the location is not line-oriented).
class ParseError : public Error {
public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(format(source, line, what)), source_(std::move(source)), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

private:
  static std::string format(const std::string& source, std::size_t line, const std::string& what) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
  }

  std::string source_;
  std::size_t line_;
};

}  // namespace mlad
