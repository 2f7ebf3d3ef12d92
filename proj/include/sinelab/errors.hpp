#pragma once

#include <stdexcept>
#include <string>

namespace sinelab {

// Error taxonomy; the CLI maps each class to a distinct exit code.
struct DescriptorError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Preconditions violated, non-finite values, insufficient tail decay.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Argument falls outside a tabulated grid / seminorm range not covered.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Determinant (or other linear-algebra step) too ill-conditioned to trust.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Result does not stabilize under refinement, or resolution guard violated.
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two independent computation routes disagree beyond tolerance.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sinelab
