#pragma once

#include <stdexcept>
#include <string>

namespace pispan {

enum class ErrorKind {
  Parse,
  ArityMismatch,
  IllFormedSubstitution,
  OpenExpression,
  UnknownSymbol,
  UnboundIndexVariable,
  IncompatibleTypes,
  UnboundName,
  RuleMismatch,
  ContextMismatch,
  SideConditionUnknown,
  SideConditionRefuted,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace pispan
