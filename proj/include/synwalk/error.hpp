#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synwalk {

// Invalid input data (malformed files, inconsistent node sets, degenerate
// clusters). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The chain has no unique invariant distribution (reducible directed graph or
// power iteration did not reach the residual target).
class NonErgodicError : public DataError {
 public:
  using DataError::DataError;
};

// Input the operation refuses by contract (e.g. modularity on weighted
// graphs, brute force beyond its node cap).
class UnsupportedInput : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace synwalk
