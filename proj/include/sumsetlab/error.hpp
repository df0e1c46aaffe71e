#pragma once

#include <stdexcept>
#include <string>

namespace sumset {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs of incompatible shape: element arity vs group rank, functions on different groups.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Inputs outside an operation's domain (empty sets, radius out of range, bad literals).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Floor of a real-valued sequence term could not be certified.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A counterexample growth policy broke one of its defining conditions.
class ConstructionError : public Error {
 public:
  ConstructionError(std::string condition, long long index)
      : Error("construction condition " + condition + " violated at n=" + std::to_string(index)),
        condition_(std::move(condition)),
        index_(index) {}

  const std::string& condition() const noexcept { return condition_; }
  long long index() const noexcept { return index_; }

 private:
  std::string condition_;
  long long index_;
};

}  // namespace sumset
