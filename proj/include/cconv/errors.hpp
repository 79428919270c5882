#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cconv {

/// Precondition violations: malformed grids, improper functions, shape mismatches.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cost was evaluated outside its domain (reflector with x*y >= 1).
class CostDomainError : public std::domain_error {
 public:
  CostDomainError(const std::string& what, double x, double y,
                  std::size_t i = kNoIndex, std::size_t j = kNoIndex)
      : std::domain_error(what), x_(x), y_(y), i_(i), j_(j) {}

  static constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

  double x() const { return x_; }
  double y() const { return y_; }
  std::size_t i() const { return i_; }
  std::size_t j() const { return j_; }

 private:
  double x_, y_;
  std::size_t i_, j_;
};

/// Malformed CSV or inline specification. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// No c-subgradient exists at the anchor point of a Jensen-type bound.
class NoWitnessError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cconv
