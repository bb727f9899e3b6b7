#include <sdp/suites.hpp>

#include <algorithm>
#include <set>

namespace sdp {

namespace {

bool concurrent(const TaggedMessage& a, const TaggedMessage& b) {
  return vc_compare(a.timestamp, b.timestamp) == CausalRelation::Concurrent;
}

// Shared state inside a product-instance state; identity for basic ones.
Value inner_of(const CrdtInstance& inst, const Value& state) {
  return inst.product ? state.at("s") : state;
}

void note_failure(SuiteResult& r, const std::string& what) {
  ++r.failures;
  if (r.notes.size() < 5) r.notes.push_back(what);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t n) {
  return seed + n * 0x9e3779b97f4a7c15ULL + 1;
}

SuiteResult make_result(const std::string& suite, const std::string& instance) {
  SuiteResult r;
  r.suite = suite;
  r.instance = instance;
  return r;
}

void require_product(const CrdtInstance& inst, const std::string& suite) {
  if (!inst.product) {
    throw SuiteNotApplicable("suite '" + suite + "' requires a product instance; '" +
                             inst.name + "' is not one");
  }
}

}  // namespace

CaseBank build_case_bank(const CrdtInstance& inst, std::uint64_t seed, std::size_t target) {
  CaseBank bank;
  auto done = [&] {
    return bank.mixed_pairs.size() >= target && bank.pairs.size() >= target &&
           bank.act_triples.size() >= target && bank.triples.size() >= target;
  };

  for (std::uint64_t run = 0; run < 3000 && !done(); ++run) {
    RandomConfig cfg;
    cfg.replicas = {"A", "B", "C"};
    cfg.ops = 8 + run % 3;
    cfg.seed = mix_seed(seed, run);
    Scenario sc = random_execution(inst, cfg);
    Trace tr = run_scenario(inst, sc);
    const auto& msgs = tr.messages;
    const std::size_t n = msgs.size();

    std::vector<std::vector<std::size_t>> deps(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && vc_compare(msgs[j].timestamp, msgs[i].timestamp) ==
                          CausalRelation::Before)
          deps[i].push_back(j);
      }
    }

    // Triples need no state: sample pairwise concurrent, pairwise
    // distinct-author triangles.
    std::size_t took = 0;
    for (std::size_t i = 0; i < n && took < 40; ++i) {
      for (std::size_t j = i + 1; j < n && took < 40; ++j) {
        if (!concurrent(msgs[i], msgs[j]) || msgs[i].author == msgs[j].author) continue;
        for (std::size_t k = j + 1; k < n && took < 40; ++k) {
          if (!concurrent(msgs[i], msgs[k]) || !concurrent(msgs[j], msgs[k])) continue;
          if (msgs[k].author == msgs[i].author || msgs[k].author == msgs[j].author) continue;
          TripleCase t{msgs[i], msgs[j], msgs[k]};
          if (bank.triples.size() < target) bank.triples.push_back(t);
          // orient: one first-component message and two second-component
          const TaggedMessage* one = nullptr;
          const TaggedMessage* two_a = nullptr;
          const TaggedMessage* two_b = nullptr;
          for (const auto* m : {&t.x, &t.y, &t.z}) {
            if (payload_component(m->payload) == 1 && !one)
              one = m;
            else if (payload_component(m->payload) == 2 && !two_a)
              two_a = m;
            else if (payload_component(m->payload) == 2)
              two_b = m;
          }
          if (one && two_a && two_b && bank.act_triples.size() < target)
            bank.act_triples.push_back(TripleCase{*one, *two_a, *two_b});
          ++took;
        }
      }
    }

    // Pair cases at every replica-visible execution point.
    auto visit = [&](const Value& state, const std::set<std::size_t>& delivered) {
      std::vector<std::size_t> cand;
      for (std::size_t i = 0; i < n; ++i) {
        if (delivered.count(i)) continue;
        bool ready = true;
        for (std::size_t d : deps[i]) {
          if (!delivered.count(d)) {
            ready = false;
            break;
          }
        }
        if (ready) cand.push_back(i);
      }
      std::size_t taken = 0;
      Value inner = inner_of(inst, state);
      for (std::size_t a = 0; a < cand.size() && taken < 6; ++a) {
        for (std::size_t b = a + 1; b < cand.size() && taken < 6; ++b) {
          const TaggedMessage& ma = msgs[cand[a]];
          const TaggedMessage& mb = msgs[cand[b]];
          if (ma.author == mb.author || !concurrent(ma, mb)) continue;
          PairCase pc{inner, ma, mb};
          bool mixed = payload_component(ma.payload) != payload_component(mb.payload);
          if (bank.pairs.size() < target) bank.pairs.push_back(pc);
          if (mixed && bank.mixed_pairs.size() < target) bank.mixed_pairs.push_back(pc);
          ++taken;
        }
      }
    };

    for (const auto& r : sc.replicas) {
      Value state = inst.initial;
      std::set<std::size_t> delivered;
      visit(state, delivered);
      for (const auto& [rep, idx] : applied_sequence(tr)) {
        if (rep != r) continue;
        auto next = inst.effect(msgs[idx], state);
        if (!next) break;
        state = std::move(*next);
        delivered.insert(idx);
        visit(state, delivered);
      }
    }
  }
  return bank;
}

OpSchedule gen_schedule(const CrdtInstance& inst, const std::vector<ReplicaId>& replicas,
                        std::size_t ops_per_replica, std::uint64_t seed) {
  if (!inst.gen_op) throw Error("instance '" + inst.name + "' has no operation generator");
  OpSchedule sched;
  sched.instance = inst.name;
  sched.replicas = replicas;
  std::map<ReplicaId, Replica> reps;
  for (const auto& r : replicas) reps.emplace(r, Replica(r, inst));
  Rng rng(seed);
  for (std::size_t round = 0; round < ops_per_replica; ++round) {
    for (const auto& r : replicas) {
      Replica& rep = reps.at(r);
      Operation op = inst.gen_op(rng, rep.state, r);
      sched.ops.emplace_back(r, op);
      rep.step(LocalOp{op});
    }
  }
  return sched;
}

// ------------------------------------------------------------------ suites

SuiteResult suite_assumptions(const CrdtInstance& inst, std::uint64_t seed,
                              std::size_t min_cases) {
  require_product(inst, "assumptions");
  const Product& p = *inst.product;
  SuiteResult r = make_result("assumptions", inst.name);
  CaseBank bank = build_case_bank(inst, seed, min_cases);

  for (const auto& pc : bank.mixed_pairs) {
    const TaggedMessage& m1 = payload_component(pc.a.payload) == 1 ? pc.a : pc.b;
    const TaggedMessage& m2 = payload_component(pc.a.payload) == 1 ? pc.b : pc.a;
    Value b1 = payload_body(m1.payload);
    Value b2 = payload_body(m2.payload);
    if (!p.first.effect(b1, pc.state) || !p.second.effect(b2, pc.state)) continue;
    ++r.cases;
    ++r.breakdown["reordering"];
    if (!check_reordering(p, pc.state, b1, b2)) {
      note_failure(r, "reordering fails at state " + canonical(pc.state) + " for m1=" +
                          canonical(b1) + " m2=" + canonical(b2));
    }
    ++r.cases;
    ++r.breakdown["preserves-authors"];
    if (!check_preserves_authors(p, b1, m1.author, b2)) {
      note_failure(r, "author of m2|>m1 excludes " + m1.author + " for m1=" + canonical(b1) +
                          " m2=" + canonical(b2));
    }
  }

  for (const auto& tc : bank.act_triples) {
    ++r.cases;
    ++r.breakdown["action-commutes"];
    if (!check_action_commutes(p, payload_body(tc.x.payload), payload_body(tc.y.payload),
                               payload_body(tc.z.payload))) {
      note_failure(r, "action order matters for m1=" + canonical(tc.x.payload) + " m2=" +
                          canonical(tc.y.payload) + " m2'=" + canonical(tc.z.payload));
    }
  }
  return r;
}

SuiteResult suite_tp(const CrdtInstance& inst, std::uint64_t seed, std::size_t min_cases,
                     std::size_t roundtrip_scenarios) {
  require_product(inst, "tp");
  const Product& p = *inst.product;
  SuiteResult r = make_result("tp", inst.name);
  CaseBank bank = build_case_bank(inst, seed, min_cases);

  auto defined = [&](const Value& tagged, const Value& s) {
    if (payload_component(tagged) == 1) return p.first.effect(payload_body(tagged), s).has_value();
    return p.second.effect(payload_body(tagged), s).has_value();
  };

  for (const auto& pc : bank.pairs) {
    if (!defined(pc.a.payload, pc.state) || !defined(pc.b.payload, pc.state)) continue;
    ++r.cases;
    ++r.breakdown["tp1"];
    if (!check_tp1(p, pc.state, pc.a.payload, pc.b.payload)) {
      note_failure(r, "tp1 fails at state " + canonical(pc.state) + " for l=" +
                          canonical(pc.a.payload) + " m=" + canonical(pc.b.payload));
    }
  }
  for (const auto& tc : bank.triples) {
    ++r.cases;
    ++r.breakdown["tp2"];
    if (!check_tp2(p, tc.x.payload, tc.y.payload, tc.z.payload)) {
      note_failure(r, "tp2 fails for k=" + canonical(tc.x.payload) + " l=" +
                          canonical(tc.y.payload) + " m=" + canonical(tc.z.payload));
    }
  }

  // Round-trip: rebuild the product from its own transformation function
  // and require identical traces.
  std::vector<Value> samples;
  {
    std::set<std::string> seen;
    for (const auto& pc : bank.pairs) {
      for (const auto* m : {&pc.a, &pc.b}) {
        if (samples.size() >= 24) break;
        if (seen.insert(canonical(m->payload)).second) samples.push_back(m->payload);
      }
    }
  }
  try {
    auto rebuilt = product_from_ot(p, ot_from_product(inst.product), samples);
    CrdtInstance rt_inst = make_instance(rebuilt);
    for (std::size_t i = 0; i < roundtrip_scenarios; ++i) {
      RandomConfig cfg;
      cfg.ops = 8;
      cfg.seed = mix_seed(seed ^ 0x5bd1e995, i);
      Scenario sc = random_execution(inst, cfg);
      Trace t1 = run_scenario(inst, sc);
      Trace t2 = run_scenario(rt_inst, sc);
      ++r.cases;
      ++r.breakdown["roundtrip"];
      if (canonical(t1.to_json()) != canonical(t2.to_json())) {
        note_failure(r, "round-trip trace differs on seed " + std::to_string(cfg.seed));
      }
    }
  } catch (const ShapeViolation& e) {
    ++r.cases;
    note_failure(r, std::string("round-trip shape violation: ") + e.what());
  }
  return r;
}

SuiteResult suite_oracle(const CrdtInstance& inst, std::uint64_t seed, std::size_t traces) {
  Value (*oracle)(const std::vector<TaggedMessage>&) = nullptr;
  if (inst.name == "aw-set") oracle = polog_awset_oracle;
  if (inst.name == "rw-set") oracle = polog_rwset_oracle;
  if (inst.name == "ew-flag") oracle = polog_ewflag_oracle;
  if (inst.name == "dw-flag") oracle = polog_dwflag_oracle;
  if (!oracle) {
    throw SuiteNotApplicable("no ordered-log oracle for '" + inst.name + "'");
  }
  SuiteResult r = make_result("oracle", inst.name);
  for (std::size_t i = 0; i < traces; ++i) {
    RandomConfig cfg;
    cfg.ops = 10;
    cfg.seed = mix_seed(seed, i);
    Scenario sc = random_execution(inst, cfg);
    Trace tr = run_scenario(inst, sc);
    std::map<ReplicaId, std::vector<TaggedMessage>> logs;
    auto seq = applied_sequence(tr);
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const auto& [rep, idx] = seq[k];
      logs[rep].push_back(tr.messages[idx]);
      Value want = oracle(logs[rep]);
      const Value& got = tr.steps[k].evals.at(rep);
      ++r.cases;
      if (canonical(want) != canonical(got)) {
        note_failure(r, "oracle " + canonical(want) + " vs eval " + canonical(got) +
                            " at step " + std::to_string(k) + " seed " +
                            std::to_string(cfg.seed));
      }
    }
    ++r.breakdown["traces"];
  }
  return r;
}

SuiteResult suite_compressed(const CrdtInstance& inst, std::uint64_t seed,
                             std::size_t traces) {
  require_product(inst, "compressed");
  if (!inst.product->monoid) {
    throw SuiteNotApplicable("'" + inst.name + "' has no composition monoid");
  }
  SuiteResult r = make_result("compressed", inst.name);
  CrdtInstance comp = make_compressed_instance(inst.product);
  for (std::size_t i = 0; i < traces; ++i) {
    RandomConfig cfg;
    cfg.ops = 10;
    cfg.seed = mix_seed(seed, i);
    Scenario sc = random_execution(inst, cfg);
    Trace plain = run_scenario(inst, sc);
    Trace packed;
    try {
      packed = run_scenario(comp, sc);
    } catch (const DivisionUndefined& e) {
      ++r.cases;
      note_failure(r, std::string("division undefined on seed ") +
                          std::to_string(cfg.seed) + ": " + e.what());
      continue;
    }
    for (std::size_t k = 0; k < plain.steps.size(); ++k) {
      ++r.cases;
      if (canonical(plain.steps[k].evals) != canonical(packed.steps[k].evals)) {
        note_failure(r, "evals differ at step " + std::to_string(k) + " seed " +
                            std::to_string(cfg.seed));
      }
      ++r.cases;
      ++r.breakdown["constant-history"];
      bool all_one = true;
      for (auto it = packed.steps[k].history.begin(); it != packed.steps[k].history.end();
           ++it) {
        if (it.value().get<std::size_t>() != 1) all_one = false;
      }
      if (!all_one) {
        note_failure(r, "compressed history not a single message at step " +
                            std::to_string(k) + " seed " + std::to_string(cfg.seed));
      }
    }
    ++r.breakdown["traces"];
  }
  return r;
}

SuiteResult suite_prune(const CrdtInstance& inst, std::uint64_t seed, std::size_t traces) {
  SuiteResult r = make_result("prune", inst.name);
  for (std::size_t i = 0; i < traces; ++i) {
    RandomConfig cfg;
    cfg.ops = 10;
    cfg.seed = mix_seed(seed, i);
    Scenario sc = random_execution(inst, cfg);
    Trace plain = run_scenario(inst, sc);
    RunOptions opts;
    opts.prune_every = 1 + i % 3;
    Trace pruned = run_scenario(inst, sc, opts);
    for (std::size_t k = 0; k < plain.steps.size(); ++k) {
      ++r.cases;
      if (canonical(plain.steps[k].evals) != canonical(pruned.steps[k].evals)) {
        note_failure(r, "pruned eval differs at step " + std::to_string(k) + " seed " +
                            std::to_string(cfg.seed));
      }
    }
    for (const auto& [rep, st] : pruned.final_states) {
      ++r.cases;
      ++r.breakdown["stabilized-empty"];
      if (inst.history_size(st) != 0) {
        note_failure(r, "history nonempty after quiescence at " + rep + " seed " +
                            std::to_string(cfg.seed));
      }
    }
    ++r.breakdown["traces"];
  }
  return r;
}

SuiteResult suite_convergence(const CrdtInstance& inst, std::uint64_t seed, std::size_t runs,
                              std::size_t schedules) {
  SuiteResult r = make_result("convergence", inst.name);
  for (std::size_t i = 0; i < runs; ++i) {
    RandomConfig cfg;
    cfg.ops = 4 + i % 7;
    cfg.seed = mix_seed(seed, i);
    Scenario sc = random_execution(inst, cfg);
    Trace tr = run_scenario(inst, sc);
    ++r.cases;
    ++r.breakdown["random-runs"];
    if (!check_convergence(tr)) {
      note_failure(r, "divergence on seed " + std::to_string(cfg.seed) + ": " +
                          canonical(tr.to_json().at("final").at("evals")));
    }
  }
  for (std::size_t i = 0; i < schedules; ++i) {
    bool pairish = i % 2 == 0;
    std::vector<ReplicaId> reps = pairish ? std::vector<ReplicaId>{"A", "B"}
                                          : std::vector<ReplicaId>{"A", "B", "C"};
    OpSchedule sched = gen_schedule(inst, reps, pairish ? 3 : 2, mix_seed(seed ^ 0xabcd, i));
    ++r.cases;
    ++r.breakdown["enumerations"];
    auto outcomes = enumerate_deliveries(inst, sched);
    if (outcomes.size() != 1) {
      note_failure(r, "schedule admits " + std::to_string(outcomes.size()) +
                          " outcomes (seed index " + std::to_string(i) + ")");
    }
  }
  return r;
}

bool suite_applicable(const CrdtInstance& inst, const std::string& suite) {
  if (suite == "assumptions" || suite == "tp") return inst.product != nullptr;
  if (suite == "compressed") return inst.product && inst.product->monoid.has_value();
  if (suite == "oracle") {
    return inst.name == "aw-set" || inst.name == "rw-set" || inst.name == "ew-flag" ||
           inst.name == "dw-flag";
  }
  if (suite == "prune") return true;
  return false;
}

std::vector<SuiteResult> run_check(const CrdtInstance& inst, const std::string& which,
                                   std::uint64_t seed) {
  static const std::vector<std::string> kSuites = {"assumptions", "tp", "oracle",
                                                   "compressed", "prune"};
  auto run_one = [&](const std::string& name) -> SuiteResult {
    if (name == "assumptions") return suite_assumptions(inst, seed);
    if (name == "tp") return suite_tp(inst, seed);
    if (name == "oracle") return suite_oracle(inst, seed);
    if (name == "compressed") return suite_compressed(inst, seed);
    if (name == "prune") return suite_prune(inst, seed);
    throw Error("unknown suite '" + name + "'");
  };
  std::vector<SuiteResult> out;
  if (which == "all") {
    for (const auto& name : kSuites) {
      if (suite_applicable(inst, name)) out.push_back(run_one(name));
    }
    return out;
  }
  if (std::find(kSuites.begin(), kSuites.end(), which) == kSuites.end()) {
    throw Error("unknown suite '" + which + "'");
  }
  out.push_back(run_one(which));
  return out;
}

}  // namespace sdp
