#pragma once

#include <stdexcept>
#include <string>

namespace ifflow {

// Base class for all domain errors raised by the library.  Callers that only
// care about "the operation was not applicable" can catch this type.
struct IfflowError : std::runtime_error {
  explicit IfflowError(const std::string& what) : std::runtime_error(what) {}
};

// A relation pair or variable set violates the declared signature
// (overlapping inputs/outputs, pair outside its rectangle, ...).
struct SignatureError : IfflowError {
  using IfflowError::IfflowError;
};

// Two operands were expected to share (or mirror) a signature and do not.
struct SignatureMismatch : IfflowError {
  using IfflowError::IfflowError;
};

// A component's flow relation is not reflexive on its outputs or not
// transitively closed.
struct NotAFlowRelation : IfflowError {
  using IfflowError::IfflowError;
};

// Two interfaces/components with overlapping output sets cannot be composed.
struct OutputsOverlap : IfflowError {
  using IfflowError::IfflowError;
};

// A state id does not belong to the machine it was used with.
struct UnknownState : IfflowError {
  using IfflowError::IfflowError;
};

// Stateful interface composition refuses incompatible initial states.
struct Incompatible : IfflowError {
  using IfflowError::IfflowError;
};

// The trace semantics are only defined for pairwise distinct variables.
struct SameVariable : IfflowError {
  using IfflowError::IfflowError;
};

// Repair suggestions are only defined for ill-formed interfaces.
struct AlreadyWellFormed : IfflowError {
  using IfflowError::IfflowError;
};

}  // namespace ifflow
