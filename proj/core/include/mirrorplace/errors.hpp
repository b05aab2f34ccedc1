#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <cstddef>

namespace mirrorplace {

/// Input that violates a documented precondition or invariant
/// (bad attribute ranges, k > n, malformed files, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The graph is not connected. `components` lists the node ids of every
/// component that is unreachable from node 0.
class DisconnectedGraphError : public ValidationError {
 public:
  DisconnectedGraphError(const std::string& what, std::vector<std::vector<std::size_t>> components)
      : ValidationError(what), components_(std::move(components)) {}

  const std::vector<std::vector<std::size_t>>& unreachable_components() const noexcept {
    return components_;
  }

 private:
  std::vector<std::vector<std::size_t>> components_;
};

/// A file failed to parse. `line` is 1-based, 0 when unknown.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line) : ValidationError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The exhaustive oracle refused an instance whose search space exceeds its budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mirrorplace
