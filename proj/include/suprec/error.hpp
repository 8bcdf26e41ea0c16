#pragma once

#include <stdexcept>
#include <string>

namespace suprec {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated a documented precondition that is not a plain range check.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration (JSON, CLI overrides).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state that valid inputs can never reach.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace suprec
