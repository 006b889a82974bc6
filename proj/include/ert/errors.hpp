#pragma once

#include <stdexcept>
#include <string>

namespace ert {

/// Base of all reportable failures. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class InvalidField : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Raised by the harness when a trial exceeds its tester's query formula.
class BudgetViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ert
