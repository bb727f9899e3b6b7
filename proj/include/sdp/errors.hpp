#pragma once

#include <stdexcept>
#include <string>

namespace sdp {

/// Base class for every error raised by the library. Partial functions
/// (effects, actions, monoid division) report absence through
/// std::optional instead; exceptions are reserved for protocol and
/// usage errors that a caller must not ignore.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An effect came back undefined where the protocol requires it to be
/// defined (e.g. a replica applying its own freshly prepared message).
struct UndefinedEffect : Error {
  using Error::Error;
};

/// An operation name that the target instance does not implement.
struct UnknownOperation : Error {
  using Error::Error;
};

/// The action of a second-component message on a first-component message
/// came back undefined where the combinator requires it.
struct UndefinedAction : Error {
  using Error::Error;
};

/// Monoid division failed while applying a compressed-product message.
/// Under causal delivery the divisor always divides, so this signals a
/// non-causal delivery or a monoid that is not left-injective.
struct DivisionUndefined : Error {
  using Error::Error;
};

/// A delivery was attempted that violates causal order.
struct NonCausalDelivery : Error {
  using Error::Error;
};

/// Registry lookup for a name that was never registered.
struct UnknownInstance : Error {
  using Error::Error;
};

/// Exhaustive delivery enumeration was asked to explore more messages
/// than the supported bound.
struct BoundExceeded : Error {
  using Error::Error;
};

/// A semiring (or similar algebraic spec) failed its registration-time
/// law check on sampled values.
struct LawViolation : Error {
  using Error::Error;
};

/// A value type without the commutativity capability was passed where
/// only commutative value CRDTs are admissible (map/homap).
struct ValueNotCommutative : Error {
  using Error::Error;
};

/// A transform function offered as an OT interpretation transforms
/// messages outside the single admissible shape.
struct ShapeViolation : Error {
  using Error::Error;
};

/// A check suite was requested for an instance it does not apply to.
struct SuiteNotApplicable : Error {
  using Error::Error;
};

/// Replaying a retained-message subset after a reset hit an undefined
/// effect; the wrapped instance does not satisfy the replay prerequisite.
struct ReplayUndefined : Error {
  using Error::Error;
};

/// A scenario document is malformed or internally inconsistent.
struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace sdp
