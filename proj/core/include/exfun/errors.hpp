#pragma once

#include <stdexcept>
#include <string>

namespace exfun {

/// Base class for failures raised inside the numerical pipeline.
/// Parameter-validation problems throw std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument landed on (or within tolerance of) the branch cut of a
/// principal-branch root.  Contour-based callers perturb their node and retry.
class BranchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A gamma-function argument or series denominator is too close to a pole.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A series failed to meet its stopping rule within the iteration cap.
class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An evaluation finished but its error estimate exceeds the requested target.
class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A transform evaluation failed at an inversion node (after any retry).
class NodeFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace exfun
