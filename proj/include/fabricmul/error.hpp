#pragma once

#include <stdexcept>
#include <string>

namespace fabricmul {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundVariableError : public Error {
 public:
  explicit UnboundVariableError(std::string name)
      : Error("unbound variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class DuplicatePinError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class PortConventionError : public Error {
 public:
  using Error::Error;
};

class IdentifierError : public Error {
 public:
  using Error::Error;
};

}  // namespace fabricmul
