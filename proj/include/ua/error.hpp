#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ua {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input; `offset` is the byte position of the problem.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// A well-formed request whose arguments violate a precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A computation was aborted because it hit a configured resource cap.
// `partial` reports how far the computation got (elements found, power
// reached, ...) so callers can surface a structured "infeasible" result.
class CapExceeded : public Error {
public:
  CapExceeded(const std::string& what, std::size_t partial = 0)
      : Error(what), partial_(partial) {}

  std::size_t partial() const { return partial_; }

private:
  std::size_t partial_;
};

}  // namespace ua
