#pragma once

#include <sdp/rational.hpp>
#include <sdp/semidirect.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sdp {

// ---------------------------------------------------------------- basic

/// Integer counter: add(n). Commutative.
CrdtInstance counter_instance();

/// Grow-only set of strings: add(e). Commutative.
CrdtInstance gset_instance();

/// Sequence with dense identifiers: insert(index, element) mints an
/// identifier strictly between its neighbours, remove(index) targets the
/// identifier at that index. Removing an absent identifier is a no-op.
CrdtInstance sequence_instance();

/// Sequence identifier: exact rational position, the minting replica, and
/// that replica's message counter at mint time, so identifiers are never
/// reused even after a removal. Orders by position; equal positions order
/// negatives first, positive ids ascending by (replica, counter), negated
/// ids descending. Negation is an involution.
struct SeqId {
  Rational pos;
  ReplicaId rid;
  std::uint64_t n = 0;
  bool neg = false;

  SeqId negated() const { return {-pos, rid, n, !neg}; }

  Value to_json() const;
  static SeqId from_json(const Value& v);
};

bool seq_id_less(const SeqId& a, const SeqId& b);

// ------------------------------------------------------------- semirings

/// A semiring instantiation: op1 is the plus-side operation (transformed
/// component), op2 the times-side (acting component). Laws are checked
/// on the sample values at product construction (LawViolation).
struct SemiringSpec {
  std::string name;
  std::string op1;
  std::string op2;
  bool naturals = false;
  long long initial = 0;
  std::function<long long(long long, long long)> plus;
  std::function<long long(long long, long long)> times;
  std::vector<long long> samples;

  /// Compression support: identity of times plus partial exact division.
  bool monoid = false;
  long long times_identity = 0;
  std::function<std::optional<long long>(long long, long long)> divide;

  /// Argument ranges for the op generator: {lo, hi} per op, op2 may
  /// exclude a value (addmult never generates mult(0)).
  long long gen1_lo = 0, gen1_hi = 9;
  long long gen2_lo = 0, gen2_hi = 9;
  std::optional<long long> gen2_exclude;
};

SemiringSpec addmult_semiring();
SemiringSpec minplus_semiring();
SemiringSpec maxmin_semiring();
SemiringSpec minmax_semiring();

std::shared_ptr<Product> semiring_product(const SemiringSpec& spec);

// -------------------------------------------------------------- products

/// Map from string keys to a commutative value CRDT, with apply(key, op)
/// targeting one key and homap(op) hitting every present key, where
/// "present" includes keys initialized concurrently with the homap.
/// Throws ValueNotCommutative for value instances without the capability.
std::shared_ptr<Product> map_homap_product(const CrdtInstance& value);

/// Sequence plus global reverse; concurrent inserts land at the mirrored
/// location. Compressible (reverse parity).
std::shared_ptr<Product> sequence_reverse_product();

/// Sequence plus range-remove over identifier intervals; concurrent
/// inserts into a removed interval are erased by the action.
std::shared_ptr<Product> sequence_rremove_product();

/// Flag where a concurrent enable survives a disable.
std::shared_ptr<Product> enable_wins_flag();

/// Mirror flag where a concurrent disable wins; reads enabled only once
/// some enable is unrevoked.
std::shared_ptr<Product> disable_wins_flag();

/// Set where add(a) survives a concurrent remove(a).
std::shared_ptr<Product> add_wins_set();

/// Mirror set where remove(a) beats a concurrent add(a).
std::shared_ptr<Product> remove_wins_set();

/// Wraps a basic instance with reset; reset beats everything concurrent.
std::shared_ptr<Product> reset_wins(const CrdtInstance& wrapped);

/// Wraps a basic instance with reset that discards exactly the causally
/// observed messages; concurrent messages survive via log replay.
std::shared_ptr<Product> observed_reset(const CrdtInstance& wrapped);

// ----------------------------------------------- negative-control products

/// First-attempt flag whose action maps enable |> disable to id. Still a
/// convergent product, but double concurrent enable/disable ends enabled.
std::shared_ptr<Product> broken_enable_wins_flag();

/// addmult with the action replaced by the identity; violates the
/// reordering assumption and genuinely diverges under concurrency.
std::shared_ptr<Product> broken_addmult();

// --------------------------------------------------- compact state variants

/// Variants of the token products that retain no product history: the
/// state itself (token set / message log) is consulted for concurrent
/// acting messages. Behaviour matches the history-keeping products.
CrdtInstance enable_wins_flag_compact();
CrdtInstance add_wins_set_compact();
CrdtInstance observed_reset_compact(const CrdtInstance& wrapped);

// --------------------------------------------------------------- registry

class Registry {
 public:
  void add(CrdtInstance inst);
  const CrdtInstance& get(const std::string& name) const;
  bool has(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, CrdtInstance> map_;
};

/// The stock registry: every shipped instance under its stable name.
Registry& default_registry();

/// Adds the deliberately broken products under test names ("broken-...").
void register_negative_controls(Registry& reg);

/// Names of the stock (convergence-expected) instances, sorted.
std::vector<std::string> convergent_instance_names();

}  // namespace sdp
