#pragma once

#include <stdexcept>
#include <string>

namespace multlab {

/// Exponent vectors or ideals of different ambient dimension were combined.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operation that needs finite colength got an ideal that is not m-primary.
struct NotMPrimaryError : std::domain_error {
  using std::domain_error::domain_error;
};

/// The zero ideal was passed where a nonzero ideal is required.
struct ZeroIdealError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Family construction or evaluation failed (bad parameters, table overrun).
struct FamilyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A precondition of a theorem check was not met.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal guard tripped (iteration caps, overflow, search exhausted).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace multlab
