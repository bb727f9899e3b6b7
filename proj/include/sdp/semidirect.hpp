#pragma once

#include <sdp/core.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sdp {

/// One side of a product: an operation vocabulary with prepare/effect
/// semantics over the shared state space, plus the author set of each
/// message (nullopt = any replica could have prepared it).
struct Component {
  std::vector<std::string> ops;
  std::function<Value(const Operation&, const Value& state, const PrepareCtx&)> prepare;
  std::function<std::optional<Value>(const Value& payload, const Value& state)> effect;
  std::function<std::optional<ReplicaId>(const Value& payload)> author;

  bool has_op(const std::string& op) const;
};

/// A commutative, left-injective composition structure on the second
/// component's messages, enabling the compressed product: compose is the
/// monoid operation and divide(h, hp) recovers m with compose(m, hp) = h
/// (nullopt when no such message exists).
struct Monoid {
  Value identity;
  std::function<Value(const Value&, const Value&)> compose;
  std::function<std::optional<Value>(const Value& h, const Value& hp)> divide;
};

/// A semidirect product of two components over one shared state space.
/// Arbitration: first-component messages are transformed by the action
/// of concurrent second-component messages, as if every concurrent
/// second-component message had been applied later.
struct Product {
  std::string name;
  Value initial;
  std::function<Value(const Value& query, const Value& state)> eval;

  Component first;   // transformed side
  Component second;  // acting side

  /// act(m2, m1): the first-component message m1 as rewritten by a later
  /// m2. nullopt = undefined (a broken action; the combinator's effect
  /// becomes undefined wherever the fold hits it).
  std::function<std::optional<Value>(const Value& m2, const Value& m1)> act;

  std::optional<Monoid> monoid;

  /// Message equivalence for checkers; defaults to JSON equality.
  /// Products whose payloads embed order-insensitive backlogs override.
  std::function<bool(const Value&, const Value&)> message_equiv;

  /// Equivalence of shared states for checkers; defaults to equality.
  std::function<bool(const Value&, const Value&)> state_equiv;

  bool messages_equal(const Value& a, const Value& b) const;
  bool inner_states_equal(const Value& a, const Value& b) const;
};

/// Product state: the shared state, the clock of everything applied so
/// far, and the retained second-component messages (the fold source).
/// History entries are kept sorted by (author, counter) so equal
/// histories have identical representations.
struct SemidirectState {
  Value inner;
  VectorClock clock;
  std::vector<TaggedMessage> history;

  Value to_json() const;
  static SemidirectState from_json(const Value& v);
};

/// Payload tag: first-component payloads travel as {"c":1,"m":...},
/// second-component payloads as {"c":2,"m":...}. The tag is attached at
/// prepare time so routing never inspects component payloads.
Value tag_payload(int component, Value payload);
int payload_component(const Value& tagged);
const Value& payload_body(const Value& tagged);

/// Prepares an operation against a product state: routes to the owning
/// component, stamps the next timestamp t[r -> t(r)+1], and tags the
/// payload. Throws UnknownOperation for a name neither component owns.
TaggedMessage sp_prepare(const Product& p, const Operation& op,
                         const SemidirectState& st, const ReplicaId& r);

/// Rewrites a first-component payload by folding the action of every
/// retained second-component message concurrent to t_prime, applied in a
/// fixed linear extension of the causal order (sorted by timestamp sum,
/// ties by author then counter). Entries causally related to t_prime are
/// skipped. nullopt if the action is undefined anywhere along the fold.
std::optional<Value> compute_m_act(const Product& p, const Value& m1,
                                   const VectorClock& t_prime,
                                   const std::vector<TaggedMessage>& history);

/// Applies one tagged message: second-component messages apply directly
/// and are retained in the history; first-component messages are
/// rewritten by compute_m_act before applying. The state clock absorbs
/// the message timestamp. nullopt if any part is undefined.
std::optional<SemidirectState> sp_effect(const Product& p, const TaggedMessage& msg,
                                         const SemidirectState& st);

/// Query delegation to the shared-state eval.
Value sp_eval(const Product& p, const Value& query, const SemidirectState& st);

/// Removes every history entry whose timestamp is dominated by the
/// frontier (entry-wise <=). Sound whenever the frontier is a lower
/// bound on the timestamp of every input the state will still receive.
SemidirectState prune_stable(const SemidirectState& st, const VectorClock& frontier);

/// Compressed product state: the shared state plus one composed
/// second-component message standing in for the whole history.
struct CompressedState {
  Value inner;
  Value composed;

  Value to_json() const;
  static CompressedState from_json(const Value& v, const Value& identity);
};

/// Compressed prepare: first-component payloads additionally carry the
/// composition witnessed at the author, so receivers can divide it out.
TaggedMessage comp_prepare(const Product& p, const Operation& op,
                           const CompressedState& st, const ReplicaId& r);

/// Compressed effect: a second-component message composes itself onto
/// the running composition; a first-component message is rewritten by
/// acting with divide(local, attached) once. Throws DivisionUndefined
/// when division fails (non-causal delivery or a non-injective monoid).
std::optional<CompressedState> comp_effect(const Product& p, const TaggedMessage& msg,
                                           const CompressedState& st);

/// (reordering): m2 . (m1 . s) equals (m2 |> m1) . (m2 . s), all parts
/// defined. m1/m2 are raw component payloads, s a shared state.
bool check_reordering(const Product& p, const Value& state, const Value& m1,
                      const Value& m2);

/// (action commutes): m2 |> (m2b |> m1) equals m2b |> (m2 |> m1), both
/// defined, compared under the product's message equivalence.
bool check_action_commutes(const Product& p, const Value& m1, const Value& m2,
                           const Value& m2b);

/// (preserves authors), inclusion form: the author set of m2 |> m1
/// contains m1's author (anonymous authorship contains every replica).
bool check_preserves_authors(const Product& p, const Value& m1,
                             const ReplicaId& m1_author, const Value& m2);

/// Wraps a product as a registered instance: state is the JSON encoding
/// of SemidirectState, payloads are component-tagged.
CrdtInstance make_instance(std::shared_ptr<const Product> p);

/// Wraps a product as its compressed variant (requires a monoid).
CrdtInstance make_compressed_instance(std::shared_ptr<const Product> p);

}  // namespace sdp
