#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

/// Primal kernel evaluated outside its domain (|x| >= 1 for LogBarrier/HardClip).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Second derivative requested at a kink of the hard-clip conjugate.
class NondifferentiableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inputs outside the regime an operation supports (e.g. chi < 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Phase-retrieval spanning constant is zero (measurements do not span R^n).
class SpanningError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed experiment or problem configuration.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace aniso
