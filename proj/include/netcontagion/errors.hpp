#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netcontagion {

// Bad argument values (m >= n, empty set where a nonempty one is required, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed text input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A starting set fails the incentive precondition of the cascade.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, std::size_t player)
      : std::runtime_error(what), player_(player) {}
  std::size_t player() const noexcept { return player_; }

 private:
  std::size_t player_;
};

// Internal invariant broken (non-positive threshold denominator, rational overflow, ...).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Brute-force routine refused an instance above its size guard.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operation only valid for local-effects-only, unit-weight games.
class UnsupportedHypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace netcontagion
