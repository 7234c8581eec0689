#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streetlab::rdf {

/// Malformed TriG or query text. The message is a single line that already
/// carries the position ("3:14: unknown prefix 'ex'").
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A query that parses but violates the structural rules (unbound filter or
/// projection variables, empty pattern list, literal predicate, ...).
class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace streetlab::rdf
