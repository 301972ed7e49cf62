#pragma once

#include <stdexcept>

namespace oebif {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed input files, bad usage. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class GraphError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IndexOutOfRange : public GraphError {
 public:
  using GraphError::GraphError;
};

class SelfLoop : public GraphError {
 public:
  using GraphError::GraphError;
};

class IsolatedVertex : public GraphError {
 public:
  using GraphError::GraphError;
};

class DuplicateEdge : public GraphError {
 public:
  using GraphError::GraphError;
};

class LengthMismatch : public GraphError {
 public:
  using GraphError::GraphError;
};

class SizeMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Failures of the numerics themselves. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotSingular : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotHopfPoint : public NumericError {
 public:
  using NumericError::NumericError;
};

class SolverError : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepUnderflow : public SolverError {
 public:
  using SolverError::SolverError;
};

class MaxStepsExceeded : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonFiniteState : public SolverError {
 public:
  using SolverError::SolverError;
};

}  // namespace oebif
