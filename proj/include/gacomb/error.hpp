#pragma once

#include <stdexcept>
#include <string>

namespace gacomb {

/// Input outside an operation's domain (alpha out of (0,1], empty set where
/// a nonempty one is required, malformed descriptor).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A checked hypothesis of a statement does not hold on the given instance.
class HypothesisNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation needs a capability (group enumeration, transporters) the action
/// does not expose and no candidate set was supplied.
class CapabilityMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subgroup closure grew past its cap.
class ClosureTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gacomb
