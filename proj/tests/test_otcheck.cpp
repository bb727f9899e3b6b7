#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sdp/harness.hpp>
#include <sdp/otcheck.hpp>
#include <sdp/suites.hpp>

using namespace sdp;

namespace {

Value add1(long long n) {
  Value v = Value::object();
  v["k"] = "add";
  v["v"] = n;
  return tag_payload(1, v);
}

Value mult2(long long n) {
  Value v = Value::object();
  v["k"] = "mult";
  v["v"] = n;
  return tag_payload(2, v);
}

}  // namespace

TEST_CASE("transform rewrites exactly the add against mult pairing") {
  auto p = semiring_product(addmult_semiring());
  CHECK(tf1(*p, add1(4), mult2(2)) == add1(8));
  CHECK(tf1(*p, mult2(2), add1(4)) == mult2(2));
  CHECK(tf1(*p, add1(4), add1(1)) == add1(4));
  CHECK(tf1(*p, mult2(2), mult2(3)) == mult2(2));
}

TEST_CASE("transform reports an undefined action") {
  auto broken = broken_enable_wins_flag();
  (void)broken;
  Product p = *semiring_product(addmult_semiring());
  p.act = [](const Value&, const Value&) -> std::optional<Value> { return std::nullopt; };
  CHECK_THROWS_AS(tf1(p, add1(4), mult2(2)), UndefinedAction);
}

TEST_CASE("first transformation property on the worked pair") {
  auto p = semiring_product(addmult_semiring());
  // from 1, add(1) and mult(3) joined either way give 6
  CHECK(check_tp1(*p, Value(1), add1(1), mult2(3)));
  CHECK(check_tp1(*p, Value(1), mult2(3), add1(1)));  // symmetric call
  CHECK(check_tp1(*p, Value(-7), add1(5), mult2(-2)));
  CHECK(check_tp1(*p, Value(2), add1(3), add1(4)));
  CHECK(check_tp1(*p, Value(2), mult2(3), mult2(4)));
}

TEST_CASE("first transformation property fails without the action") {
  auto broken = broken_addmult();
  CHECK_FALSE(check_tp1(*broken, Value(1), add1(1), mult2(3)));
}

TEST_CASE("second transformation property on the worked triple") {
  auto p = semiring_product(addmult_semiring());
  // add(1) transformed by mult(2) then mult(3) is add(6) either way
  CHECK(tf1(*p, tf1(*p, add1(1), mult2(2)), mult2(3)) == add1(6));
  CHECK(tf1(*p, tf1(*p, add1(1), mult2(3)), mult2(2)) == add1(6));
  CHECK(check_tp2(*p, mult2(2), add1(1), mult2(3)));
  CHECK(check_tp2(*p, mult2(2), mult2(5), mult2(3)));
  CHECK(check_tp2(*p, add1(2), add1(5), mult2(3)));
}

TEST_CASE("round trip through the transformation function is trace identical") {
  auto p = semiring_product(addmult_semiring());
  TransformFn tf = ot_from_product(p);

  std::vector<Value> samples = {add1(1), add1(4), add1(-2), mult2(2), mult2(3), mult2(-1)};
  auto rebuilt = product_from_ot(*p, tf, samples);
  CrdtInstance original = make_instance(p);
  CrdtInstance roundtrip = make_instance(rebuilt);

  const CrdtInstance& gen = default_registry().get("addmult");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomConfig cfg;
    cfg.seed = seed;
    cfg.ops = 8;
    Scenario sc = random_execution(gen, cfg);
    Trace t1 = run_scenario(original, sc);
    Trace t2 = run_scenario(roundtrip, sc);
    CHECK(canonical(t1.to_json()) == canonical(t2.to_json()));
  }
}

TEST_CASE("transform functions outside the admissible shape are rejected") {
  auto p = semiring_product(addmult_semiring());
  std::vector<Value> samples = {add1(1), mult2(2)};

  TransformFn rewrites_second;
  rewrites_second.fn = [&](const Value& m, const Value& l) -> Value {
    if (payload_component(m) == 2 && payload_component(l) == 1) return mult2(99);
    return ot_from_product(p).fn(m, l);
  };
  CHECK_THROWS_AS(product_from_ot(*p, rewrites_second, samples), ShapeViolation);

  TransformFn rewrites_same;
  rewrites_same.fn = [&](const Value& m, const Value& l) -> Value {
    if (payload_component(m) == 1 && payload_component(l) == 1) return add1(99);
    return ot_from_product(p).fn(m, l);
  };
  CHECK_THROWS_AS(product_from_ot(*p, rewrites_same, samples), ShapeViolation);
}

TEST_CASE("tp suite passes for every product and fails for the broken control") {
  Registry& reg = default_registry();
  register_negative_controls(reg);
  SuiteResult good = suite_tp(reg.get("addmult"), 9, 80, 5);
  CHECK(good.passed());
  CHECK(good.breakdown.at("tp1") >= 80);
  CHECK(good.breakdown.at("tp2") >= 80);
  CHECK(good.breakdown.at("roundtrip") == 5);

  SuiteResult bad = suite_tp(reg.get("broken-addmult"), 9, 80, 5);
  CHECK_FALSE(bad.passed());
}
