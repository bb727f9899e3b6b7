#pragma once

#include <sdp/harness.hpp>
#include <sdp/otcheck.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdp {

struct SuiteResult {
  std::string suite;
  std::string instance;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// Cases per named sub-check (e.g. "reordering", "tp1").
  std::map<std::string, std::size_t> breakdown;
  /// First few failure descriptions.
  std::vector<std::string> notes;

  bool passed() const { return failures == 0; }
};

// ---------------------------------------------------------------- case bank

/// A pair of messages concurrent by timestamp with distinct authors, both
/// admissible at the recorded shared state (drawn from a real execution
/// point whose delivered set covers their causal past but not them).
struct PairCase {
  Value state;  // shared (inner) state
  TaggedMessage a;
  TaggedMessage b;
};

/// Three pairwise concurrent messages with pairwise distinct authors.
struct TripleCase {
  TaggedMessage x;
  TaggedMessage y;
  TaggedMessage z;
};

struct CaseBank {
  std::vector<PairCase> mixed_pairs;  // one message per component
  std::vector<PairCase> pairs;        // any component mix
  std::vector<TripleCase> act_triples;  // one first-component, two second
  std::vector<TripleCase> triples;      // any component mix
};

/// Draws cases from seeded executions until every vector reaches the
/// target size (or a generous run budget is exhausted).
CaseBank build_case_bank(const CrdtInstance& inst, std::uint64_t seed, std::size_t target);

/// Ops-only schedule: each replica issues ops generated against its own
/// local state, round-robin.
OpSchedule gen_schedule(const CrdtInstance& inst, const std::vector<ReplicaId>& replicas,
                        std::size_t ops_per_replica, std::uint64_t seed);

// ------------------------------------------------------------------ suites

/// (reordering), (action commutes), (preserves authors) on generated
/// admissible cases; at least min_cases per checker. Products only.
SuiteResult suite_assumptions(const CrdtInstance& inst, std::uint64_t seed,
                              std::size_t min_cases = 500);

/// Transformation properties 1 and 2 on generated cases plus the
/// transformation round-trip: rebuilding the product from its own
/// transformation function is trace-identical on seeded scenarios.
/// Products only.
SuiteResult suite_tp(const CrdtInstance& inst, std::uint64_t seed,
                     std::size_t min_cases = 500, std::size_t roundtrip_scenarios = 50);

/// Eval equals the ordered-log oracle at every step of seeded traces.
/// Only the four token instances (aw-set, rw-set, ew-flag, dw-flag).
SuiteResult suite_oracle(const CrdtInstance& inst, std::uint64_t seed,
                         std::size_t traces = 100);

/// Compressed variant agrees with the plain product on every step of
/// seeded traces and keeps exactly one composed history message.
/// Products with a monoid only.
SuiteResult suite_compressed(const CrdtInstance& inst, std::uint64_t seed,
                             std::size_t traces = 100);

/// Interleaved pruning never changes any eval, and history is empty after
/// terminal quiescence.
SuiteResult suite_prune(const CrdtInstance& inst, std::uint64_t seed,
                        std::size_t traces = 100);

/// Seeded random executions all converge; bounded-exhaustive delivery
/// enumeration of small schedules yields singleton outcome sets.
SuiteResult suite_convergence(const CrdtInstance& inst, std::uint64_t seed,
                              std::size_t runs = 200, std::size_t schedules = 24);

/// The CLI suite names: assumptions, tp, oracle, compressed, prune.
bool suite_applicable(const CrdtInstance& inst, const std::string& suite);

/// Runs one named suite (SuiteNotApplicable when the instance lacks it)
/// or, for "all", every applicable one.
std::vector<SuiteResult> run_check(const CrdtInstance& inst, const std::string& which,
                                   std::uint64_t seed);

}  // namespace sdp
