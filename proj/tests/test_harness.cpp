#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sdp/suites.hpp>

#include <algorithm>

using namespace sdp;

namespace {

Scenario worked_addmult_scenario() {
  Scenario sc;
  sc.instance = "addmult";
  sc.replicas = {"A", "B"};
  sc.seed = 1;
  sc.events = {
      OpEvent{"A", {"mult", Value::array({2})}},
      OpEvent{"A", {"add", Value::array({1})}},
      OpEvent{"B", {"mult", Value::array({3})}},
      OpEvent{"B", {"add", Value::array({4})}},
      DeliverEvent{"A", 2},
      DeliverEvent{"A", 3},
      DeliverEvent{"B", 0},
      DeliverEvent{"B", 1},
  };
  return sc;
}

TaggedMessage msg2(Value payload, const ReplicaId& author, const VectorClock& ts) {
  return TaggedMessage{tag_payload(2, std::move(payload)), ts, author};
}

TaggedMessage msg1(Value payload, const ReplicaId& author, const VectorClock& ts) {
  return TaggedMessage{tag_payload(1, std::move(payload)), ts, author};
}

VectorClock clock_of(std::initializer_list<std::pair<const char*, std::uint64_t>> es) {
  VectorClock t;
  for (const auto& [r, n] : es) t.set(r, n);
  return t;
}

}  // namespace

TEST_CASE("scenario json round trip") {
  Scenario sc = worked_addmult_scenario();
  sc.events.push_back(DeliverAllEvent{});
  Scenario back = Scenario::from_json(sc.to_json());
  CHECK(canonical(back.to_json()) == canonical(sc.to_json()));
}

TEST_CASE("scenario validation points at the offending field") {
  Value doc = worked_addmult_scenario().to_json();
  doc.erase("instance");
  CHECK_THROWS_WITH_AS(Scenario::from_json(doc), doctest::Contains("instance"),
                       ScenarioError);

  doc = worked_addmult_scenario().to_json();
  doc["replicas"] = Value::array({"A", "A"});
  CHECK_THROWS_AS(Scenario::from_json(doc), ScenarioError);

  doc = worked_addmult_scenario().to_json();
  doc["events"][2] = Value::object();
  CHECK_THROWS_WITH_AS(Scenario::from_json(doc), doctest::Contains("events[2]"),
                       ScenarioError);

  doc = worked_addmult_scenario().to_json();
  doc["events"][5]["msg"] = -1;
  CHECK_THROWS_WITH_AS(Scenario::from_json(doc), doctest::Contains("events[5]"),
                       ScenarioError);
}

TEST_CASE("traces are deterministic and replayable byte for byte") {
  Registry& reg = default_registry();
  Scenario sc = worked_addmult_scenario();
  sc.events.push_back(DeliverAllEvent{});
  Trace t1 = run_scenario(reg, sc);
  Trace t2 = run_scenario(reg, sc);
  CHECK(canonical(t1.to_json()) == canonical(t2.to_json()));
  CHECK(check_convergence(t1));
  CHECK(t1.final_evals.at("A") == Value(17));
  CHECK(t1.final_evals.at("B") == Value(17));
}

TEST_CASE("per step evals follow the worked exchange") {
  Trace t = run_scenario(default_registry(), worked_addmult_scenario());
  std::vector<Value> a_evals, b_evals;
  for (const auto& step : t.steps) {
    if (step.replica == "A") a_evals.push_back(step.evals.at("A"));
    if (step.replica == "B") b_evals.push_back(step.evals.at("B"));
  }
  CHECK(a_evals == std::vector<Value>{Value(2), Value(3), Value(9), Value(17)});
  CHECK(b_evals == std::vector<Value>{Value(3), Value(7), Value(14), Value(17)});
}

TEST_CASE("deliveries are validated") {
  Registry& reg = default_registry();

  Scenario sc = worked_addmult_scenario();
  sc.events[4] = DeliverEvent{"A", 3};  // B's add before B's mult
  CHECK_THROWS_AS(run_scenario(reg, sc), NonCausalDelivery);

  sc = worked_addmult_scenario();
  sc.events[5] = DeliverEvent{"A", 2};  // delivered twice
  CHECK_THROWS_AS(run_scenario(reg, sc), ScenarioError);

  sc = worked_addmult_scenario();
  sc.events[4] = DeliverEvent{"A", 9};  // not yet emitted
  CHECK_THROWS_AS(run_scenario(reg, sc), ScenarioError);

  sc = worked_addmult_scenario();
  sc.events[4] = DeliverEvent{"C", 2};  // unknown replica
  CHECK_THROWS_AS(run_scenario(reg, sc), ScenarioError);

  sc = worked_addmult_scenario();
  sc.instance = "no-such-instance";
  CHECK_THROWS_AS(run_scenario(reg, sc), UnknownInstance);
}

TEST_CASE("deliver all drains to quiescence in causal order") {
  Scenario sc = worked_addmult_scenario();
  sc.events.resize(4);  // ops only
  sc.events.push_back(DeliverAllEvent{});
  Trace t = run_scenario(default_registry(), sc);
  CHECK(t.steps.size() == 8);  // 4 ops + 4 drained deliveries
  CHECK(check_convergence(t));
  CHECK(t.final_clocks.at("A") == t.final_clocks.at("B"));
  CHECK(t.final_evals.at("A") == Value(17));
}

TEST_CASE("applied sequence lists one message per step") {
  Trace t = run_scenario(default_registry(), worked_addmult_scenario());
  auto seq = applied_sequence(t);
  REQUIRE(seq.size() == 8);
  CHECK(seq[0] == std::pair<ReplicaId, std::size_t>{"A", 0});
  CHECK(seq[4] == std::pair<ReplicaId, std::size_t>{"A", 2});
  CHECK(seq[7] == std::pair<ReplicaId, std::size_t>{"B", 1});
}

TEST_CASE("stability frontier tracks pending messages") {
  Trace t = run_scenario(default_registry(), worked_addmult_scenario());

  // nothing delivered across replicas yet: everything may still matter
  CHECK(stability_frontier(t, 0) == VectorClock());
  CHECK(stability_frontier(t, 4) == VectorClock());

  // after the full exchange the common clock is stable
  VectorClock full = clock_of({{"A", 2}, {"B", 2}});
  CHECK(stability_frontier(t, t.steps.size()) == full);

  // with A fully caught up but B still missing A's messages, only B's
  // progress is stable
  CHECK(stability_frontier(t, 6) == VectorClock());

  Scenario sc = worked_addmult_scenario();
  std::swap(sc.events[4], sc.events[6]);
  std::swap(sc.events[5], sc.events[7]);
  Trace t2 = run_scenario(default_registry(), sc);
  CHECK(stability_frontier(t2, t2.steps.size()) == full);
}

TEST_CASE("interleaved pruning is invisible in evals") {
  for (const char* name : {"addmult", "ew-flag", "obs-reset:counter"}) {
    const CrdtInstance& inst = default_registry().get(name);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RandomConfig cfg;
      cfg.seed = seed;
      cfg.ops = 9;
      Scenario sc = random_execution(inst, cfg);
      Trace plain = run_scenario(inst, sc);
      RunOptions opts;
      opts.prune_every = 1 + seed % 3;
      Trace pruned = run_scenario(inst, sc, opts);
      REQUIRE(plain.steps.size() == pruned.steps.size());
      for (std::size_t i = 0; i < plain.steps.size(); ++i)
        CHECK(plain.steps[i].evals == pruned.steps[i].evals);
      for (const auto& [rid, st] : pruned.final_states) {
        (void)rid;
        CHECK(inst.history_size(st) == 0);  // quiescent and pruned: nothing retained
      }
    }
  }
}

TEST_CASE("random executions are reproducible and within budget") {
  const CrdtInstance& inst = default_registry().get("aw-set");
  RandomConfig cfg;
  cfg.seed = 77;
  cfg.ops = 12;
  Scenario s1 = random_execution(inst, cfg);
  Scenario s2 = random_execution(inst, cfg);
  CHECK(canonical(s1.to_json()) == canonical(s2.to_json()));

  std::size_t ops = 0;
  for (const auto& ev : s1.events) ops += std::holds_alternative<OpEvent>(ev) ? 1 : 0;
  CHECK(ops == 12);
  CHECK(std::holds_alternative<DeliverAllEvent>(s1.events.back()));
  CHECK(check_convergence(run_scenario(inst, s1)));
}

TEST_CASE("generation rejects weights outside the op alphabet") {
  const CrdtInstance& inst = default_registry().get("counter");
  RandomConfig cfg;
  cfg.weights["frobnicate"] = 1.0;
  CHECK_THROWS_AS(random_execution(inst, cfg), UnknownOperation);
}

TEST_CASE("delivery enumeration certifies the worked schedules") {
  Registry& reg = default_registry();

  OpSchedule sched = schedule_from_scenario(worked_addmult_scenario());
  CHECK(sched.ops.size() == 4);
  auto outcomes = enumerate_deliveries(reg.get("addmult"), sched);
  REQUIRE(outcomes.size() == 1);
  CHECK(*outcomes.begin() == canonical(Value(17)));

  Scenario mp;
  mp.instance = "minplus";
  mp.replicas = {"A", "B"};
  mp.events = {
      OpEvent{"A", {"add", Value::array({1})}},
      OpEvent{"A", {"min", Value::array({0})}},
      OpEvent{"B", {"add", Value::array({1})}},
      OpEvent{"B", {"min", Value::array({0})}},
  };
  auto mp_outcomes = enumerate_deliveries(reg.get("minplus"), schedule_from_scenario(mp));
  REQUIRE(mp_outcomes.size() == 1);
  CHECK(*mp_outcomes.begin() == canonical(Value(1)));
}

TEST_CASE("delivery enumeration exposes divergence") {
  Registry& reg = default_registry();
  register_negative_controls(reg);
  OpSchedule sched;
  sched.instance = "broken-addmult";
  sched.replicas = {"A", "B"};
  sched.ops = {{"A", {"add", Value::array({2})}}, {"B", {"mult", Value::array({3})}}};
  auto outcomes = enumerate_deliveries(reg.get("broken-addmult"), sched);
  CHECK(outcomes.size() > 1);
}

TEST_CASE("delivery enumeration enforces its bound") {
  OpSchedule sched;
  sched.instance = "counter";
  sched.replicas = {"A"};
  for (int i = 0; i < 9; ++i) sched.ops.push_back({"A", {"add", Value::array({1})}});
  CHECK_THROWS_AS(enumerate_deliveries(default_registry().get("counter"), sched),
                  BoundExceeded);
}

TEST_CASE("add wins oracle over handmade histories") {
  Value add_x = Value::object();
  add_x["k"] = "add";
  add_x["a"] = "x";
  add_x["tok"] = Value::array({"x", "A", 1});
  Value rem_x = Value::object();
  rem_x["k"] = "remove";
  rem_x["a"] = "x";
  rem_x["S"] = Value::array();

  // concurrent add and remove: add wins
  std::vector<TaggedMessage> h1 = {
      msg2(add_x, "A", clock_of({{"A", 1}})),
      msg1(rem_x, "B", clock_of({{"B", 1}})),
  };
  CHECK(polog_awset_oracle(h1) == Value::array({"x"}));

  // remove saw the add: x is gone
  std::vector<TaggedMessage> h2 = {
      msg2(add_x, "A", clock_of({{"A", 1}})),
      msg1(rem_x, "B", clock_of({{"A", 1}, {"B", 1}})),
  };
  CHECK(polog_awset_oracle(h2) == Value::array());

  // re-added afterwards
  Value add_x2 = add_x;
  add_x2["tok"] = Value::array({"x", "A", 2});
  std::vector<TaggedMessage> h3 = h2;
  h3.push_back(msg2(add_x2, "A", clock_of({{"A", 2}, {"B", 1}})));
  CHECK(polog_awset_oracle(h3) == Value::array({"x"}));

  // remove-wins mirror: adds sit on the rewritten side, removes act
  Value rw_add = Value::object();
  rw_add["k"] = "add";
  rw_add["a"] = "x";
  rw_add["S"] = Value::array();
  Value rw_rem = Value::object();
  rw_rem["k"] = "remove";
  rw_rem["a"] = "x";
  rw_rem["tok"] = Value::array({"x", "B", 1});

  std::vector<TaggedMessage> r1 = {
      msg1(rw_add, "A", clock_of({{"A", 1}})),
      msg2(rw_rem, "B", clock_of({{"B", 1}})),
  };
  CHECK(polog_rwset_oracle(r1) == Value::array());  // concurrent: remove wins

  std::vector<TaggedMessage> r2 = {
      msg1(rw_add, "A", clock_of({{"A", 1}})),
      msg2(rw_rem, "B", clock_of({{"A", 1}, {"B", 1}})),
  };
  CHECK(polog_rwset_oracle(r2) == Value::array());

  std::vector<TaggedMessage> r3 = r2;
  r3.push_back(msg1(rw_add, "A", clock_of({{"A", 2}, {"B", 1}})));
  CHECK(polog_rwset_oracle(r3) == Value::array({"x"}));  // re-add overrides
}

TEST_CASE("flag oracles over handmade histories") {
  Value en = Value::object();
  en["k"] = "enable";
  en["tok"] = Value::array({"A", 1});
  Value dis = Value::object();
  dis["k"] = "disable";
  dis["S"] = Value::array();

  std::vector<TaggedMessage> concurrent = {
      msg2(en, "A", clock_of({{"A", 1}})),
      msg1(dis, "B", clock_of({{"B", 1}})),
  };
  CHECK(polog_ewflag_oracle(concurrent) == Value("enabled"));

  std::vector<TaggedMessage> observed = {
      msg2(en, "A", clock_of({{"A", 1}})),
      msg1(dis, "B", clock_of({{"A", 1}, {"B", 1}})),
  };
  CHECK(polog_ewflag_oracle(observed) == Value("disabled"));
  CHECK(polog_ewflag_oracle({}) == Value("disabled"));

  // the disable-wins payloads mirror the components
  Value den = Value::object();
  den["k"] = "enable";
  den["S"] = Value::array();
  Value ddis = Value::object();
  ddis["k"] = "disable";
  ddis["tok"] = Value::array({"B", 1});
  std::vector<TaggedMessage> dconc = {
      msg1(den, "A", clock_of({{"A", 1}})),
      msg2(ddis, "B", clock_of({{"B", 1}})),
  };
  CHECK(polog_dwflag_oracle(dconc) == Value("disabled"));

  std::vector<TaggedMessage> dobs = {
      msg2(ddis, "B", clock_of({{"B", 1}})),
      msg1(den, "A", clock_of({{"A", 1}, {"B", 1}})),
  };
  CHECK(polog_dwflag_oracle(dobs) == Value("enabled"));
  CHECK(polog_dwflag_oracle({}) == Value("disabled"));
}

TEST_CASE("oracle suite agrees with the products step by step") {
  for (const char* name : {"aw-set", "rw-set", "ew-flag", "dw-flag"}) {
    SuiteResult r = suite_oracle(default_registry().get(name), 5, 20);
    INFO(name, ": ", r.notes.empty() ? "" : r.notes.front());
    CHECK(r.passed());
    CHECK(r.cases > 0);
  }
}

TEST_CASE("case bank pairs are concurrent with distinct authors") {
  const CrdtInstance& inst = default_registry().get("aw-set");
  CaseBank bank = build_case_bank(inst, 3, 60);
  REQUIRE(bank.mixed_pairs.size() >= 60);
  for (const auto& pc : bank.mixed_pairs) {
    CHECK(pc.a.author != pc.b.author);
    CHECK(vc_compare(pc.a.timestamp, pc.b.timestamp) == CausalRelation::Concurrent);
  }
  REQUIRE(bank.act_triples.size() >= 60);
  for (const auto& tc : bank.act_triples) {
    CHECK(payload_component(tc.x.payload) == 1);
    CHECK(payload_component(tc.y.payload) == 2);
    CHECK(payload_component(tc.z.payload) == 2);
  }
}

TEST_CASE("suites know what they apply to") {
  Registry& reg = default_registry();
  CHECK(suite_applicable(reg.get("addmult"), "assumptions"));
  CHECK_FALSE(suite_applicable(reg.get("counter"), "assumptions"));
  CHECK(suite_applicable(reg.get("addmult"), "compressed"));
  CHECK_FALSE(suite_applicable(reg.get("maxmin"), "compressed"));
  CHECK(suite_applicable(reg.get("aw-set"), "oracle"));
  CHECK_FALSE(suite_applicable(reg.get("addmult"), "oracle"));
  CHECK(suite_applicable(reg.get("counter"), "prune"));

  CHECK_THROWS_AS(run_check(reg.get("counter"), "assumptions", 1), SuiteNotApplicable);
  CHECK_THROWS_AS(run_check(reg.get("counter"), "no-such-suite", 1), Error);

  auto all = run_check(reg.get("maxmin"), "all", 1);
  std::vector<std::string> names;
  for (const auto& r : all) names.push_back(r.suite);
  CHECK(names == std::vector<std::string>{"assumptions", "tp", "prune"});
}
