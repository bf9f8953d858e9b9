#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grpcert {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `offset` is the byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Operands belong to different backends (kind, degree/dimension or field).
class CompositionError : public Error {
 public:
  using Error::Error;
};

/// Element order could not be determined within the configured limit.
class OrderOverflowError : public Error {
 public:
  using Error::Error;
};

/// A closure or orbit enumeration grew past its cap.
class CapExceededError : public Error {
 public:
  CapExceededError(const std::string& what, std::size_t reached)
      : Error(what + " (reached " + std::to_string(reached) + " elements)"), reached_(reached) {}

  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

/// A word refers to a name that is not bound.
class UnboundNameError : public Error {
 public:
  explicit UnboundNameError(const std::string& name)
      : Error("unbound name '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Certificate or group file does not match the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A check could not produce a result (as opposed to producing a failing verdict).
class CheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace grpcert
