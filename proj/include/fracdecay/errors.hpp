#pragma once

#include <stdexcept>
#include <string>

namespace fracdecay {

/// Argument outside the mathematical domain of an operation (poles, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters the implementation has not been validated for.
class UnsupportedRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A numerical procedure failed to reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration; the message lists every violated field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fracdecay
