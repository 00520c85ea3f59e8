#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxtsp {

// Raised when an input violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Instance text that cannot be parsed. line() is 1-based; 0 means the
// problem is not tied to a single line (e.g. premature end of input).
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, const std::string& message)
      : InvalidInput("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace maxtsp
