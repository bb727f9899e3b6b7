#pragma once

#include <sdp/errors.hpp>
#include <sdp/value.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sdp {

/// Replica identifiers are short strings with their natural total order.
using ReplicaId = std::string;

/// (author, author-counter) pair identifying one message uniquely:
/// counters issued by a single author are consecutive from 1.
using Dot = std::pair<ReplicaId, std::uint64_t>;

/// Outcome of comparing two vector clocks under the causal order.
enum class CausalRelation { Before, After, Concurrent, Equal };

/// Sparse vector clock: a map from replica id to a positive counter.
/// Absent entries are zero and zero entries are never stored, so equal
/// clocks always have identical representations.
class VectorClock {
 public:
  VectorClock() = default;

  std::uint64_t get(const ReplicaId& r) const {
    auto it = entries_.find(r);
    return it == entries_.end() ? 0 : it->second;
  }

  /// Sets entry r; dropping to zero removes the entry (canonical form).
  void set(const ReplicaId& r, std::uint64_t n) {
    if (n == 0)
      entries_.erase(r);
    else
      entries_[r] = n;
  }

  bool operator==(const VectorClock& o) const { return entries_ == o.entries_; }

  /// True iff every entry of *this is <= the corresponding entry of o.
  bool leq(const VectorClock& o) const;

  const std::map<ReplicaId, std::uint64_t>& entries() const { return entries_; }

  /// Sum of all entries; strictly increases along the causal order.
  std::uint64_t sum() const;

  Value to_json() const;
  static VectorClock from_json(const Value& v);

 private:
  std::map<ReplicaId, std::uint64_t> entries_;
};

/// t[r -> t(r)+1]: the timestamp a replica assigns to its next message.
VectorClock vc_increment(const VectorClock& t, const ReplicaId& r);

/// Pointwise maximum (join in the clock lattice).
VectorClock vc_merge(const VectorClock& a, const VectorClock& b);

/// Classifies a vs b: Before (a < b), After, Equal, or Concurrent.
CausalRelation vc_compare(const VectorClock& a, const VectorClock& b);

/// Causal delivery rule for a message timestamped msg_ts by sender at a
/// replica whose clock is local: deliverable iff the message is the
/// sender's next unseen message and every other entry is already covered.
/// Requires msg_ts(sender) >= 1.
bool causal_deliverable(const VectorClock& msg_ts, const ReplicaId& sender,
                        const VectorClock& local);

/// A broadcast unit: an instance-level payload plus the envelope the
/// protocol stamps on it. timestamp(author) >= 1 always holds, and the
/// timestamps issued by one author are totally ordered.
struct TaggedMessage {
  Value payload;
  VectorClock timestamp;
  ReplicaId author;

  Dot dot() const { return {author, timestamp.get(author)}; }

  bool operator==(const TaggedMessage& o) const {
    return payload == o.payload && timestamp == o.timestamp && author == o.author;
  }

  Value to_json() const;
  static TaggedMessage from_json(const Value& v);
};

/// A named operation with its (JSON array) arguments, as written in
/// scenario files.
struct Operation {
  std::string name;
  Value args = Value::array();
};

/// Context handed to prepare: the issuing replica and the counter its
/// message is about to receive (the replica's own clock entry + 1).
/// Instances that mint unique tokens derive them from (replica, seq).
struct PrepareCtx {
  ReplicaId replica;
  std::uint64_t seq = 1;
};

/// Deterministic generator used wherever seeded randomness is needed.
/// A thin splitmix64 core keeps results independent of standard-library
/// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish value in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Signed value in [lo, hi] inclusive.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

struct Product;  // defined in semidirect.hpp

/// A registered op-based data type behind a uniform dynamic interface.
/// States and payloads are JSON values; effect is partial (nullopt means
/// undefined, never a trap); eval is pure. Products built by the
/// combinator expose the same interface and additionally carry their
/// component structure for the checkers.
struct CrdtInstance {
  std::string name;
  Value initial;
  std::vector<std::string> ops;

  /// True iff every pair of messages commutes on every state where both
  /// effects are defined; capability gate for map/homap values.
  bool commutative = false;

  std::function<Value(const Operation&, const Value& state, const PrepareCtx&)> prepare;
  std::function<std::optional<Value>(const TaggedMessage&, const Value& state)> effect;

  /// Effect on a bare payload, without the protocol envelope. Set for
  /// basic instances whose semantics never consult timestamps; wrappers
  /// that replay or nest messages (map values, reset bodies) require it.
  std::function<std::optional<Value>(const Value& payload, const Value& state)> payload_effect;

  std::function<Value(const Value& query, const Value& state)> eval;

  /// Admissible author set of a payload: a concrete replica, or nullopt
  /// meaning any replica could have prepared it.
  std::function<std::optional<ReplicaId>(const Value& payload)> author;

  /// Drops retained history entries dominated by the frontier. Identity
  /// for instances that retain nothing.
  std::function<Value(const Value& state, const VectorClock& frontier)> prune;

  /// Number of retained history entries in a state (0 for basic types).
  std::function<std::size_t(const Value& state)> history_size;

  /// Draws a random well-formed operation against the given state.
  std::function<Operation(Rng&, const Value& state, const ReplicaId&)> gen_op;

  /// State equivalence for checkers; defaults to JSON equality. Products
  /// whose states contain order-insensitive logs override it.
  std::function<bool(const Value&, const Value&)> state_equiv;

  /// Component structure when this instance is a combinator product.
  std::shared_ptr<const Product> product;

  bool has_op(const std::string& op) const;
  bool states_equal(const Value& a, const Value& b) const;
};

/// One step of the replica protocol: either issue a local operation
/// (prepare, stamp, self-apply, emit) or receive a remote message.
struct LocalOp {
  Operation op;
};
struct Receive {
  TaggedMessage msg;
};
using ReplicaEvent = std::variant<LocalOp, Receive>;

/// A single replica running an instance: its state plus the transport
/// clock counting messages seen per author (its own included).
struct Replica {
  ReplicaId id;
  const CrdtInstance* instance = nullptr;
  Value state;
  VectorClock clock;

  Replica() = default;
  Replica(ReplicaId rid, const CrdtInstance& inst)
      : id(std::move(rid)), instance(&inst), state(inst.initial) {}

  /// Applies one event. LocalOp returns the emitted message; Receive
  /// returns nullopt. Throws NonCausalDelivery if the receive violates
  /// causal order and UndefinedEffect if an effect comes back undefined.
  std::optional<TaggedMessage> step(const ReplicaEvent& ev);

  /// Pure read; never changes state.
  Value query(const Value& q = Value("value")) const;
};

/// replica_step as a free function over explicit pieces (the form the
/// tests drive directly); Replica::step delegates here.
std::optional<TaggedMessage> replica_step(const CrdtInstance& inst, Value& state,
                                          VectorClock& clock, const ReplicaId& id,
                                          const ReplicaEvent& ev);

}  // namespace sdp
