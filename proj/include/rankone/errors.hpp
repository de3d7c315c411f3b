#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "rankone/rational.hpp"

namespace rankone {

/// Malformed input text. Carries a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Structurally well-formed input that violates a domain constraint.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation needed more stages (or a taller tower) than allowed.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what,
                         std::optional<Scalar> achieved_unresolved = std::nullopt)
      : std::runtime_error(what), achieved_(std::move(achieved_unresolved)) {}

  /// Unresolved mass reached before giving up, when meaningful.
  const std::optional<Scalar>& achieved_unresolved() const { return achieved_; }

 private:
  std::optional<Scalar> achieved_;
};

}  // namespace rankone
