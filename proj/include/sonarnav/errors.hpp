#pragma once

#include <stdexcept>
#include <string>

namespace sonarnav {

/// Precondition violated by a caller-supplied argument.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Structurally valid input whose values break a domain invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text (scenario, map or echo-stream file).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sonarnav
