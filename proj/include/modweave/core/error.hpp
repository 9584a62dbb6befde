#pragma once

#include <stdexcept>
#include <string>

namespace modweave {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Value has no single TypeSpec (e.g. a heterogeneous array).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Arguments outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An operation was called with its precondition violated.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed text: XML, type grammar, signature grammar.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) +
                             ": " + message
                       : message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a schema or structural rule. `path` names
// the offending element or attribute, e.g. "component/@id".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace modweave
