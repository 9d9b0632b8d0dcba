#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boxlab {

// Contract violations: out-of-range indices, mismatched scenarios, invalid
// effects handed to operations that require validity.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input files. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace boxlab
