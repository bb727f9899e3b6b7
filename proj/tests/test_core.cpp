#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sdp/crdts.hpp>

using namespace sdp;

TEST_CASE("vector clock entries are sparse and canonical") {
  VectorClock t;
  CHECK(t.get("A") == 0);
  CHECK(t.entries().empty());

  t.set("A", 3);
  CHECK(t.get("A") == 3);
  CHECK(t.entries().size() == 1);

  t.set("A", 0);
  CHECK(t.entries().empty());

  VectorClock u;
  u.set("B", 1);
  u.set("B", 0);
  CHECK(t == u);
  CHECK(canonical(t.to_json()) == canonical(u.to_json()));
}

TEST_CASE("clock json round trip") {
  VectorClock t;
  t.set("A", 2);
  t.set("C", 7);
  CHECK(VectorClock::from_json(t.to_json()) == t);
  CHECK(VectorClock::from_json(VectorClock().to_json()) == VectorClock());
}

TEST_CASE("increment and merge") {
  VectorClock t;
  VectorClock t1 = vc_increment(t, "A");
  CHECK(t1.get("A") == 1);
  CHECK(t.get("A") == 0);  // input untouched

  VectorClock a, b;
  a.set("A", 2);
  a.set("B", 1);
  b.set("B", 5);
  b.set("C", 1);
  VectorClock m = vc_merge(a, b);
  CHECK(m.get("A") == 2);
  CHECK(m.get("B") == 5);
  CHECK(m.get("C") == 1);
}

TEST_CASE("compare covers all four relations") {
  VectorClock a, b;
  CHECK(vc_compare(a, b) == CausalRelation::Equal);

  b.set("A", 1);
  CHECK(vc_compare(a, b) == CausalRelation::Before);
  CHECK(vc_compare(b, a) == CausalRelation::After);
  CHECK(a.leq(b));
  CHECK_FALSE(b.leq(a));

  a.set("B", 1);
  CHECK(vc_compare(a, b) == CausalRelation::Concurrent);
  CHECK(vc_compare(b, a) == CausalRelation::Concurrent);
  CHECK_FALSE(a.leq(b));

  VectorClock c = vc_merge(a, b);
  CHECK(vc_compare(a, c) == CausalRelation::Before);
  CHECK(vc_compare(c, c) == CausalRelation::Equal);
}

TEST_CASE("sum strictly increases along the causal order") {
  VectorClock t;
  CHECK(t.sum() == 0);
  t = vc_increment(t, "A");
  t = vc_increment(t, "B");
  t = vc_increment(t, "A");
  CHECK(t.sum() == 3);
}

TEST_CASE("causal delivery rule") {
  VectorClock local;
  local.set("A", 1);

  // B's first message, no other dependencies: deliverable
  VectorClock m1;
  m1.set("B", 1);
  CHECK(causal_deliverable(m1, "B", local));

  // B's second message before its first: not deliverable
  VectorClock m2;
  m2.set("B", 2);
  CHECK_FALSE(causal_deliverable(m2, "B", local));

  // depends on an unseen message from C
  VectorClock m3;
  m3.set("B", 1);
  m3.set("C", 1);
  CHECK_FALSE(causal_deliverable(m3, "B", local));

  // already covered dependency from A
  VectorClock m4;
  m4.set("B", 1);
  m4.set("A", 1);
  CHECK(causal_deliverable(m4, "B", local));

  // already seen (stale) message
  VectorClock m5;
  m5.set("A", 1);
  CHECK_FALSE(causal_deliverable(m5, "A", local));
}

TEST_CASE("tagged message json round trip and dot") {
  TaggedMessage msg;
  msg.payload = Value::object();
  msg.payload["k"] = "add";
  msg.payload["n"] = 4;
  msg.timestamp.set("A", 2);
  msg.timestamp.set("B", 1);
  msg.author = "A";

  CHECK(msg.dot() == Dot{"A", 2});
  CHECK(TaggedMessage::from_json(msg.to_json()) == msg);
}

TEST_CASE("rng is deterministic and bounded") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng r(7);
  for (int i = 0; i < 200; ++i) {
    CHECK(r.below(5) < 5);
    long long v = r.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
}

TEST_CASE("replica protocol issues, stamps, and self-applies") {
  CrdtInstance inst = counter_instance();
  Replica a("A", inst);
  CHECK(a.query() == Value(0));

  auto m = a.step(LocalOp{Operation{"add", Value::array({5})}});
  REQUIRE(m.has_value());
  CHECK(m->author == "A");
  CHECK(m->timestamp.get("A") == 1);
  CHECK(a.clock.get("A") == 1);
  CHECK(a.query() == Value(5));

  auto m2 = a.step(LocalOp{Operation{"add", Value::array({-2})}});
  REQUIRE(m2.has_value());
  CHECK(m2->timestamp.get("A") == 2);
  CHECK(a.query() == Value(3));

  Replica b("B", inst);
  CHECK_FALSE(b.step(Receive{*m}).has_value());
  CHECK(b.query() == Value(5));
  CHECK(b.clock.get("A") == 1);
  CHECK_FALSE(b.step(Receive{*m2}).has_value());
  CHECK(b.query() == Value(3));
}

TEST_CASE("receive rejects causal order violations") {
  CrdtInstance inst = counter_instance();
  Replica a("A", inst);
  auto m1 = *a.step(LocalOp{Operation{"add", Value::array({1})}});
  auto m2 = *a.step(LocalOp{Operation{"add", Value::array({2})}});

  Replica b("B", inst);
  CHECK_THROWS_AS(b.step(Receive{m2}), NonCausalDelivery);  // gap
  b.step(Receive{m1});
  CHECK_THROWS_AS(b.step(Receive{m1}), NonCausalDelivery);  // duplicate
  b.step(Receive{m2});
  CHECK(b.query() == Value(3));
}

TEST_CASE("unknown operations are rejected") {
  CrdtInstance inst = counter_instance();
  CHECK(inst.has_op("add"));
  CHECK_FALSE(inst.has_op("frobnicate"));
  Replica a("A", inst);
  CHECK_THROWS_AS(a.step(LocalOp{Operation{"frobnicate", Value::array()}}),
                  UnknownOperation);
}

TEST_CASE("concurrent counter messages commute") {
  CrdtInstance inst = counter_instance();
  Replica a("A", inst), b("B", inst), c1("C", inst), c2("C", inst);
  auto ma = *a.step(LocalOp{Operation{"add", Value::array({3})}});
  auto mb = *b.step(LocalOp{Operation{"add", Value::array({4})}});

  c1.step(Receive{ma});
  c1.step(Receive{mb});
  c2.step(Receive{mb});
  c2.step(Receive{ma});
  CHECK(c1.query() == c2.query());
  CHECK(c1.state == c2.state);
}
