#pragma once

#include <stdexcept>
#include <string>

namespace bvcalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid arguments: non-bijective permutations, mixed
// parent spaces, inhomogeneous elements where a sign is needed.
class MalformedInput : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

// Data that parses but violates a structural requirement (degree, symmetry,
// purity, missing validation).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An invariant that must hold for any valid input failed; this indicates a bug.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace bvcalc
