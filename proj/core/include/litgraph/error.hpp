#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace litgraph {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad ratios, wrong shapes, empty sets).
class InputError : public Error {
 public:
  using Error::Error;
};

// Line-oriented parse failure; line numbers are 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : InputError("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// An entity or relation label that is not interned in the graph/table.
class UnknownEntityError : public Error {
 public:
  using Error::Error;
};

// Non-finite values during training or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace litgraph
