#pragma once

#include <stdexcept>
#include <string>

namespace belief_hjb {

/// Invalid input: a parameter, grid or configuration breaks a stated invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The computation itself went wrong (non-finite values, singular systems,
/// a broken monotonicity condition).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace belief_hjb
