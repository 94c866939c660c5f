#pragma once

#include <stdexcept>
#include <string>

namespace tagwalk {

// Invalid arguments to a generator, walker, estimator or theory routine.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid or unknown keys in an experiment configuration.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// A power-law fit could not be performed (too few usable points).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A series evaluation did not converge before its hard cap.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition on its input data.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed text input (edge lists, traces, configs, post logs).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tagwalk
