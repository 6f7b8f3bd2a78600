#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace litrec {

/// Base class for all litrec errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Lookup by an id that does not exist (maps to HTTP 404 in the service).
class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what) : Error(what) {}
};

/// Unrecoverable syntax error in an input stream; carries the byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Caller violated an operation precondition.
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

/// Internal invariant broken (out-of-range occurrence, inconsistent logs).
class ContractViolationError : public Error {
 public:
  explicit ContractViolationError(const std::string& what) : Error(what) {}
};

}  // namespace litrec
