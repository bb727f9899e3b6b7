#pragma once

#include <sdp/crdts.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sdp {

// ---------------------------------------------------------------- scenario

struct OpEvent {
  ReplicaId replica;
  Operation op;
};

struct DeliverEvent {
  ReplicaId to;
  std::size_t msg = 0;  // index into the run's emitted-message list
};

struct DeliverAllEvent {};

using ScenarioEvent = std::variant<OpEvent, DeliverEvent, DeliverAllEvent>;

/// A reproducible multi-replica run: the instance under test, the replica
/// ids, a seed for drain choices, and an ordered event list. Deliveries
/// name messages by emission index and must be causally deliverable when
/// executed.
struct Scenario {
  std::string instance;
  std::vector<ReplicaId> replicas;
  std::uint64_t seed = 0;
  std::vector<ScenarioEvent> events;

  Value to_json() const;
  static Scenario from_json(const Value& v);
};

Value event_to_json(const ScenarioEvent& ev);
ScenarioEvent event_from_json(const Value& v);

// ------------------------------------------------------------------- trace

/// One executed step. Explicit events map to one step each; a deliver_all
/// drain expands into one step per delivery it performs. Every step
/// applies exactly one message somewhere.
struct TraceStep {
  Value event;                         // normalized event record
  ReplicaId replica;                   // acting replica
  std::optional<std::size_t> emitted;  // message index, op steps only
  Value evals;                         // replica id -> eval snapshot
  Value history;                       // replica id -> retained history size
};

struct Trace {
  Scenario scenario;
  std::vector<TaggedMessage> messages;  // emission order
  std::vector<TraceStep> steps;
  std::map<ReplicaId, Value> final_states;
  std::map<ReplicaId, Value> final_evals;
  std::map<ReplicaId, VectorClock> final_clocks;

  Value to_json() const;
};

struct RunOptions {
  /// When positive, every k-th step each replica discards history entries
  /// below the current stability frontier.
  std::size_t prune_every = 0;
};

/// Executes a scenario deterministically. Drain order during deliver_all:
/// repeatedly scan replicas in id order, delivering one pending causally
/// deliverable message per visit (seed-picked among candidates) until
/// quiescent.
Trace run_scenario(const CrdtInstance& inst, const Scenario& sc, const RunOptions& opts = {});
Trace run_scenario(const Registry& reg, const Scenario& sc, const RunOptions& opts = {});

/// All replicas end with equal eval snapshots, canonically serialized.
bool check_convergence(const Trace& trace);

/// The step-th prefix's stability bound: entry-wise minimum over every
/// replica clock and every in-flight message timestamp. All messages
/// applied after this point carry timestamps at or above it.
VectorClock stability_frontier(const Trace& trace, std::size_t step);

/// (replica, message index) applied at each step, in step order.
std::vector<std::pair<ReplicaId, std::size_t>> applied_sequence(const Trace& trace);

// ------------------------------------------------------------- generation

struct RandomConfig {
  std::vector<ReplicaId> replicas = {"A", "B", "C"};
  std::size_t ops = 10;
  std::uint64_t seed = 0;
  /// Weight per operation name; empty means the instance generator's own
  /// mix. Names outside the instance alphabet are rejected.
  std::map<std::string, double> weights;
};

/// Draws a random scenario by simulating it: ops via the instance
/// generator against live replica state, explicit causally valid
/// deliveries in between, one terminal deliver_all. Same seed, same
/// scenario.
Scenario random_execution(const CrdtInstance& inst, const RandomConfig& cfg);

// ------------------------------------------------------------ enumeration

/// Ops only, no deliveries: each replica issues its listed operations
/// locally, then every causal delivery order is enumerated.
struct OpSchedule {
  std::string instance;
  std::vector<ReplicaId> replicas;
  std::vector<std::pair<ReplicaId, Operation>> ops;
};

/// The set of canonical final evals reachable across all replicas and all
/// causal delivery interleavings of the schedule's messages. A singleton
/// certifies strong convergence of the schedule. Throws BoundExceeded
/// above max_messages total ops.
std::set<std::string> enumerate_deliveries(const CrdtInstance& inst, const OpSchedule& sched,
                                           std::size_t max_messages = 8);

/// Projects a scenario's op events (deliveries dropped) for enumeration.
OpSchedule schedule_from_scenario(const Scenario& sc);

// ----------------------------------------------------------- polog oracles

/// Literal reads over a causally ordered message log, used as independent
/// oracles against the product implementations. Input is the list of
/// product messages applied at one replica.
Value polog_awset_oracle(const std::vector<TaggedMessage>& history);
Value polog_rwset_oracle(const std::vector<TaggedMessage>& history);
Value polog_ewflag_oracle(const std::vector<TaggedMessage>& history);
Value polog_dwflag_oracle(const std::vector<TaggedMessage>& history);

}  // namespace sdp
