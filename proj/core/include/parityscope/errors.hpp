#pragma once

#include <stdexcept>
#include <string>

namespace parityscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Probability mass escaped the truncated Fock space beyond the declared tail tolerance.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Configuration parsed but violates a constraint. `field()` names the offending key.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace parityscope
