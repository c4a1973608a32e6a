#pragma once

#include <stdexcept>
#include <string>

namespace gridhull {

// Malformed arguments: dimension mismatches, unbalanced injections, bad configs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Network topology problems such as disconnected islands.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Elimination or enumeration exceeded a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model data makes the requested quantity meaningless (e.g. an NTC bound
// that cannot protect a line at any scaling).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unbounded problem where a bounded one was required; carries the direction.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text/JSON parse failure. `line` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gridhull
