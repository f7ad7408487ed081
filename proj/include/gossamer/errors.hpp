#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gossamer {

// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the expression parser; carries the byte offset of the failure
// and the set of tokens that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset,
             std::vector<std::string> expected = {})
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// fact() applied to something other than the main variable plus a rational
// constant, or an operation (differentiate, point shift) that cannot handle
// a factorial node.
class FactorialDomainError : public Error {
 public:
  using Error::Error;
};

// A sign or order decision depends on a parameter combination the given
// assumptions do not resolve.  `query` names the blocking combination.
class AssumptionNeeded : public Error {
 public:
  AssumptionNeeded(const std::string& what, std::string query)
      : Error(what + ": " + query), query_(std::move(query)) {}

  const std::string& query() const { return query_; }

 private:
  std::string query_;
};

class DivisionByExactZero : public Error {
 public:
  using Error::Error;
};

// ln of a negative quantity, factorial away from infinity, and similar.
class UndefinedAtPoint : public Error {
 public:
  using Error::Error;
};

// The truncation budget, even after adaptive retries, cannot separate the
// terms needed for a decision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

// Basis tower nesting exceeded the configured maximum.
class DepthLimit : public Error {
 public:
  using Error::Error;
};

// A relation-transform table row was applied with a failing side condition.
class ConditionViolated : public Error {
 public:
  ConditionViolated(const std::string& what, std::string condition)
      : Error(what + ": " + condition), condition_(std::move(condition)) {}

  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// The relation/operator pair has no row in the transform table.
class UnsupportedRow : public Error {
 public:
  using Error::Error;
};

// L'Hopital invoked on a ratio that is not an indeterminate form.
class NotIndeterminate : public Error {
 public:
  using Error::Error;
};

}  // namespace gossamer
