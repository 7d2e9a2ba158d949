#ifndef EPISTOCK_ERRORS_HPP_
#define EPISTOCK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace epistock {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration documents: syntax, unknown keys, invariant violations.
class ConfigError : public Error {
public:
  using Error::Error;
};

class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
public:
  ValidationError(const std::string& field, const std::string& what)
      : ConfigError(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

private:
  std::string field_;
};

class UnknownKeyError : public ConfigError {
public:
  explicit UnknownKeyError(const std::string& key)
      : ConfigError("unknown key: " + key), key_(key) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

/// Sweep axis specifications that cannot be honored.
class AxisError : public Error {
public:
  using Error::Error;
};

/// Numerical integration failures.
class SolveError : public Error {
public:
  SolveError(const std::string& what, double t) : Error(what), t_(t) {}
  double failure_time() const { return t_; }

private:
  double t_;
};

class StepUnderflowError : public SolveError {
public:
  using SolveError::SolveError;
};

class NonFiniteStateError : public SolveError {
public:
  using SolveError::SolveError;
};

class NonFiniteDerivativeError : public SolveError {
public:
  using SolveError::SolveError;
};

}  // namespace epistock

#endif  // EPISTOCK_ERRORS_HPP_
