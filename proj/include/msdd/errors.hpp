#pragma once

#include <stdexcept>
#include <string>

namespace msdd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
};

/// A field was passed to an operator defined on a different basis family.
class BasisError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InvalidPotential : public Error {
 public:
  using Error::Error;
};

class InvalidPump : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf appeared in the state; carries the simulation time.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class OracleInvalid : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace msdd
