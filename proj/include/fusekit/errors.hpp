#pragma once

#include <stdexcept>
#include <string>

namespace fusekit {

/// Incompatible matrix/vector dimensions.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Singular or numerically rank-deficient matrix.
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative computation failed to converge within its cap.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input violates a value-level precondition (dt <= 0, non-SPD R, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Fewer measurement rows than unknowns.
struct UnderdeterminedError : DomainError {
  using DomainError::DomainError;
};

/// Config document could not be parsed or validated.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fusekit
