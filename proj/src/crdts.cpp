#include <sdp/crdts.hpp>

#include <algorithm>
#include <set>
#include <utility>

namespace sdp {

namespace {

// ------------------------------------------------------------ arg helpers

long long arg_int(const Operation& op, std::size_t i) {
  if (op.args.size() <= i || !op.args.at(i).is_number_integer()) {
    throw ScenarioError("operation '" + op.name + "' expects an integer argument at index " +
                        std::to_string(i) + ", got " + canonical(op.args));
  }
  return op.args.at(i).get<long long>();
}

std::string arg_str(const Operation& op, std::size_t i) {
  if (op.args.size() <= i || !op.args.at(i).is_string()) {
    throw ScenarioError("operation '" + op.name + "' expects a string argument at index " +
                        std::to_string(i) + ", got " + canonical(op.args));
  }
  return op.args.at(i).get<std::string>();
}

// --------------------------------------------------- sorted-array helpers

bool arr_contains(const Value& arr, const Value& x) {
  for (const auto& e : arr)
    if (e == x) return true;
  return false;
}

Value arr_insert_sorted(Value arr, const Value& x) {
  auto it = std::lower_bound(arr.begin(), arr.end(), x,
                             [](const Value& a, const Value& b) { return a < b; });
  if (it != arr.end() && *it == x) return arr;
  arr.insert(it, x);
  return arr;
}

Value arr_intersect(const Value& a, const Value& b) {
  Value out = Value::array();
  for (const auto& e : a)
    if (arr_contains(b, e)) out.push_back(e);
  return out;
}

Value dot_json(const ReplicaId& r, std::uint64_t n) {
  Value d = Value::array();
  d.push_back(r);
  d.push_back(n);
  return d;
}

// Multiset comparison of dotted entry sequences: same dot->entry map and
// each author's counters ascending in both (the only causal order
// recoverable from dots alone).
bool dotted_seq_equiv(const Value& a, const Value& b) {
  if (a.size() != b.size()) return false;
  auto key = [](const Value& seq) {
    std::map<std::string, Value> m;
    for (const auto& e : seq) m[canonical(e.at("dot"))] = e;
    return m;
  };
  auto ascending = [](const Value& seq) {
    std::map<std::string, std::uint64_t> last;
    for (const auto& e : seq) {
      const auto& d = e.at("dot");
      auto author = d.at(0).get<std::string>();
      auto n = d.at(1).get<std::uint64_t>();
      auto it = last.find(author);
      if (it != last.end() && it->second >= n) return false;
      last[author] = n;
    }
    return true;
  };
  return key(a) == key(b) && ascending(a) && ascending(b);
}

// -------------------------------------------------------- basic instances

CrdtInstance make_basic(std::string name, Value initial, std::vector<std::string> ops) {
  CrdtInstance inst;
  inst.name = std::move(name);
  inst.initial = std::move(initial);
  inst.ops = std::move(ops);
  inst.prune = [](const Value& state, const VectorClock&) { return state; };
  inst.history_size = [](const Value&) -> std::size_t { return 0; };
  return inst;
}

void wire_effect(CrdtInstance& inst) {
  auto pe = inst.payload_effect;
  inst.effect = [pe](const TaggedMessage& msg, const Value& state) {
    return pe(msg.payload, state);
  };
}

}  // namespace

CrdtInstance counter_instance() {
  CrdtInstance inst = make_basic("counter", Value(0), {"add"});
  inst.commutative = true;
  inst.prepare = [](const Operation& op, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "add";
    m["n"] = arg_int(op, 0);
    return m;
  };
  inst.payload_effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    return Value(state.get<long long>() + m.at("n").get<long long>());
  };
  wire_effect(inst);
  inst.eval = [](const Value&, const Value& state) { return state; };
  inst.author = [](const Value&) { return std::optional<ReplicaId>{}; };
  inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
    return Operation{"add", Value::array({rng.range(-5, 5)})};
  };
  return inst;
}

CrdtInstance gset_instance() {
  CrdtInstance inst = make_basic("gset", Value::array(), {"add"});
  inst.commutative = true;
  inst.prepare = [](const Operation& op, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "add";
    m["e"] = arg_str(op, 0);
    return m;
  };
  inst.payload_effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    return arr_insert_sorted(state, m.at("e"));
  };
  wire_effect(inst);
  inst.eval = [](const Value&, const Value& state) { return state; };
  inst.author = [](const Value&) { return std::optional<ReplicaId>{}; };
  inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
    static const char* pool[] = {"a", "b", "c", "d", "e"};
    return Operation{"add", Value::array({pool[rng.below(5)]})};
  };
  return inst;
}

// ---------------------------------------------------------------- sequence

Value SeqId::to_json() const {
  Value v = Value::object();
  v["x"] = pos.str();
  v["r"] = rid;
  v["n"] = n;
  v["neg"] = neg;
  return v;
}

SeqId SeqId::from_json(const Value& v) {
  return SeqId{Rational::parse(v.at("x").get<std::string>()),
               v.at("r").get<std::string>(), v.at("n").get<std::uint64_t>(),
               v.at("neg").get<bool>()};
}

bool seq_id_less(const SeqId& a, const SeqId& b) {
  if (!(a.pos == b.pos)) return a.pos < b.pos;
  if (a.neg != b.neg) return a.neg;  // negatives precede positives on ties
  auto ak = std::make_pair(a.rid, a.n);
  auto bk = std::make_pair(b.rid, b.n);
  if (!a.neg) return ak < bk;
  return bk < ak;  // negated identifiers order opposite to base ids
}

namespace {

bool seq_entry_less(const Value& a, const Value& b) {
  return seq_id_less(SeqId::from_json(a.at("id")), SeqId::from_json(b.at("id")));
}

Value seq_insert_entry(Value state, const Value& entry) {
  // Identifiers are unique in causal executions; replace defensively.
  for (auto& e : state) {
    if (e.at("id") == entry.at("id")) {
      e = entry;
      return state;
    }
  }
  auto it = std::lower_bound(state.begin(), state.end(), entry, seq_entry_less);
  state.insert(it, entry);
  return state;
}

Value seq_erase_id(Value state, const Value& id) {
  for (auto it = state.begin(); it != state.end(); ++it) {
    if (it->at("id") == id) {
      state.erase(it);
      return state;
    }
  }
  return state;  // absent identifier: no-op
}

// Mints a position for insertion at `index`: strictly between distinct
// neighbour positions, one beyond at the ends. When neighbours share a
// position (concurrent same-midpoint inserts) the new element lands just
// after the run of equal positions.
SeqId seq_fresh_id(const Value& state, std::size_t index, const ReplicaId& rid,
                   std::uint64_t n) {
  std::size_t len = state.size();
  auto pos_at = [&](std::size_t i) { return SeqId::from_json(state.at(i).at("id")).pos; };
  Rational x;
  if (len == 0) {
    x = Rational(0);
  } else if (index == 0) {
    x = pos_at(0).minus_one();
  } else if (index == len) {
    x = pos_at(len - 1).plus_one();
  } else {
    Rational left = pos_at(index - 1);
    Rational right = pos_at(index);
    if (left < right) {
      x = left.midpoint(right);
    } else {
      std::size_t j = index;
      while (j < len && !(left < pos_at(j))) ++j;
      x = (j < len) ? left.midpoint(pos_at(j)) : left.plus_one();
    }
  }
  return SeqId{x, rid, n, false};
}

Value seq_prepare(const Operation& op, const Value& state, const PrepareCtx& ctx) {
  Value m = Value::object();
  if (op.name == "insert") {
    long long i = arg_int(op, 0);
    if (i < 0 || static_cast<std::size_t>(i) > state.size()) {
      throw ScenarioError("insert index " + std::to_string(i) + " out of range 0.." +
                          std::to_string(state.size()));
    }
    m["k"] = "add";
    m["e"] = op.args.at(1);
    m["id"] = seq_fresh_id(state, static_cast<std::size_t>(i), ctx.replica, ctx.seq).to_json();
    return m;
  }
  if (op.name == "remove") {
    long long i = arg_int(op, 0);
    if (i < 0 || static_cast<std::size_t>(i) >= state.size()) {
      throw ScenarioError("remove index " + std::to_string(i) + " out of range");
    }
    m["k"] = "remove";
    m["id"] = state.at(static_cast<std::size_t>(i)).at("id");
    return m;
  }
  throw UnknownOperation("sequence has no operation '" + op.name + "'");
}

std::optional<Value> seq_effect(const Value& m, const Value& state) {
  const std::string k = m.at("k").get<std::string>();
  if (k == "add") {
    Value entry = Value::object();
    entry["e"] = m.at("e");
    entry["id"] = m.at("id");
    return seq_insert_entry(state, entry);
  }
  if (k == "remove") return seq_erase_id(state, m.at("id"));
  if (k == "id") return state;
  return std::nullopt;
}

std::optional<ReplicaId> seq_author(const Value& m) {
  if (m.at("k") == "add") return m.at("id").at("r").get<std::string>();
  return std::nullopt;  // removes and id can be prepared by anyone
}

Value seq_eval(const Value&, const Value& state) {
  Value out = Value::array();
  for (const auto& e : state) out.push_back(e.at("e"));
  return out;
}

Operation gen_seq_op(Rng& rng, const Value& state, bool removes) {
  static const char* pool[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::size_t len = state.size();
  if (removes && len > 0 && rng.below(3) == 0) {
    return Operation{"remove", Value::array({rng.below(len)})};
  }
  return Operation{"insert", Value::array({rng.below(len + 1), pool[rng.below(8)]})};
}

Component sequence_component() {
  Component c;
  c.ops = {"insert", "remove"};
  c.prepare = seq_prepare;
  c.effect = seq_effect;
  c.author = seq_author;
  return c;
}

}  // namespace

CrdtInstance sequence_instance() {
  CrdtInstance inst = make_basic("seq", Value::array(), {"insert", "remove"});
  inst.prepare = seq_prepare;
  inst.payload_effect = seq_effect;
  wire_effect(inst);
  inst.eval = seq_eval;
  inst.author = seq_author;
  inst.gen_op = [](Rng& rng, const Value& state, const ReplicaId&) {
    return gen_seq_op(rng, state, true);
  };
  return inst;
}

// --------------------------------------------------------------- semirings

SemiringSpec addmult_semiring() {
  SemiringSpec s;
  s.name = "addmult";
  s.op1 = "add";
  s.op2 = "mult";
  s.initial = 1;
  s.plus = [](long long a, long long b) { return a + b; };
  s.times = [](long long a, long long b) { return a * b; };
  s.samples = {-3, -1, 0, 1, 2, 3, 4};
  s.monoid = true;
  s.times_identity = 1;
  s.divide = [](long long h, long long hp) -> std::optional<long long> {
    if (hp == 0 || h % hp != 0) return std::nullopt;
    return h / hp;
  };
  s.gen1_lo = -4;
  s.gen1_hi = 4;
  s.gen2_lo = -3;
  s.gen2_hi = 3;
  s.gen2_exclude = 0;  // keeps every generated scenario compression-valid
  return s;
}

SemiringSpec minplus_semiring() {
  SemiringSpec s;
  s.name = "minplus";
  s.op1 = "min";
  s.op2 = "add";
  s.naturals = true;
  s.initial = 0;
  s.plus = [](long long a, long long b) { return std::min(a, b); };
  s.times = [](long long a, long long b) { return a + b; };
  s.samples = {0, 1, 2, 3, 5, 7};
  s.monoid = true;
  s.times_identity = 0;
  s.divide = [](long long h, long long hp) -> std::optional<long long> {
    if (h < hp) return std::nullopt;
    return h - hp;
  };
  s.gen1_lo = 0;
  s.gen1_hi = 9;
  s.gen2_lo = 0;
  s.gen2_hi = 4;
  return s;
}

SemiringSpec maxmin_semiring() {
  SemiringSpec s;
  s.name = "maxmin";
  s.op1 = "max";
  s.op2 = "min";
  s.naturals = true;
  s.initial = 0;
  s.plus = [](long long a, long long b) { return std::max(a, b); };
  s.times = [](long long a, long long b) { return std::min(a, b); };
  s.samples = {0, 1, 2, 3, 5, 7};
  s.gen1_lo = 0;
  s.gen1_hi = 9;
  s.gen2_lo = 0;
  s.gen2_hi = 9;
  return s;
}

SemiringSpec minmax_semiring() {
  SemiringSpec s;
  s.name = "minmax";
  s.op1 = "min";
  s.op2 = "max";
  s.naturals = true;
  s.initial = 0;
  s.plus = [](long long a, long long b) { return std::min(a, b); };
  s.times = [](long long a, long long b) { return std::max(a, b); };
  s.samples = {0, 1, 2, 3, 5, 7};
  s.gen1_lo = 0;
  s.gen1_hi = 9;
  s.gen2_lo = 0;
  s.gen2_hi = 9;
  return s;
}

namespace {

void check_semiring_laws(const SemiringSpec& s) {
  auto fail = [&](const std::string& law) {
    throw LawViolation("semiring '" + s.name + "' violates " + law + " on sample values");
  };
  for (long long a : s.samples) {
    for (long long b : s.samples) {
      if (s.plus(a, b) != s.plus(b, a)) fail("plus commutativity");
      if (s.times(a, b) != s.times(b, a)) fail("times commutativity");
      for (long long c : s.samples) {
        if (s.plus(s.plus(a, b), c) != s.plus(a, s.plus(b, c))) fail("plus associativity");
        if (s.times(s.times(a, b), c) != s.times(a, s.times(b, c)))
          fail("times associativity");
        if (s.times(a, s.plus(b, c)) != s.plus(s.times(a, b), s.times(a, c)))
          fail("distributivity");
      }
    }
  }
}

Value semiring_msg(const std::string& kind, long long v) {
  Value m = Value::object();
  m["k"] = kind;
  m["v"] = v;
  return m;
}

}  // namespace

std::shared_ptr<Product> semiring_product(const SemiringSpec& spec) {
  check_semiring_laws(spec);
  auto p = std::make_shared<Product>();
  auto s = std::make_shared<SemiringSpec>(spec);
  p->name = s->name;
  p->initial = Value(s->initial);
  p->eval = [](const Value&, const Value& state) { return state; };

  auto validate = [s](const Operation& op) {
    long long v = arg_int(op, 0);
    if (s->naturals && v < 0) {
      throw ScenarioError("'" + s->name + "' takes non-negative arguments, got " +
                          std::to_string(v));
    }
    return v;
  };

  p->first.ops = {s->op1};
  p->first.prepare = [s, validate](const Operation& op, const Value&, const PrepareCtx&) {
    return semiring_msg(s->op1, validate(op));
  };
  p->first.effect = [s](const Value& m, const Value& state) -> std::optional<Value> {
    return Value(s->plus(m.at("v").get<long long>(), state.get<long long>()));
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {s->op2};
  p->second.prepare = [s, validate](const Operation& op, const Value&, const PrepareCtx&) {
    return semiring_msg(s->op2, validate(op));
  };
  p->second.effect = [s](const Value& m, const Value& state) -> std::optional<Value> {
    return Value(s->times(m.at("v").get<long long>(), state.get<long long>()));
  };
  p->second.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  // times(t) |> plus(v) = plus(times(t, v))
  p->act = [s](const Value& m2, const Value& m1) -> std::optional<Value> {
    return semiring_msg(s->op1, s->times(m2.at("v").get<long long>(),
                                         m1.at("v").get<long long>()));
  };

  if (s->monoid) {
    Monoid m;
    m.identity = semiring_msg(s->op2, s->times_identity);
    m.compose = [s](const Value& a, const Value& b) {
      return semiring_msg(s->op2, s->times(a.at("v").get<long long>(),
                                           b.at("v").get<long long>()));
    };
    m.divide = [s](const Value& h, const Value& hp) -> std::optional<Value> {
      auto q = s->divide(h.at("v").get<long long>(), hp.at("v").get<long long>());
      if (!q) return std::nullopt;
      return semiring_msg(s->op2, *q);
    };
    p->monoid = std::move(m);
  }
  return p;
}

// --------------------------------------------------------------- map/homap

std::shared_ptr<Product> map_homap_product(const CrdtInstance& value) {
  if (!value.commutative) {
    throw ValueNotCommutative("map values must be commutative instances; '" + value.name +
                              "' is not");
  }
  if (!value.payload_effect) {
    throw Error("map values must expose a bare payload effect");
  }
  auto val = std::make_shared<CrdtInstance>(value);
  auto p = std::make_shared<Product>();
  p->name = "map-homap";
  p->initial = Value::object();
  p->eval = [val](const Value& q, const Value& state) {
    Value out = Value::object();
    for (auto it = state.begin(); it != state.end(); ++it) {
      out[it.key()] = val->eval(q, it.value().at("v"));
    }
    return out;
  };

  // Applies one value message to a key entry unless the dot (if any) was
  // already applied there; dotless direct apply-messages always run.
  auto apply_to_entry = [val](Value& entry, const Value& vm,
                              const Value* dot) -> bool {
    if (dot != nullptr && arr_contains(entry.at("hd"), *dot)) return true;
    auto next = val->payload_effect(vm, entry.at("v"));
    if (!next) return false;
    entry["v"] = std::move(*next);
    if (dot != nullptr) entry["hd"] = arr_insert_sorted(entry.at("hd"), *dot);
    return true;
  };

  p->first.ops = {"apply"};
  p->first.prepare = [val](const Operation& op, const Value& state, const PrepareCtx& ctx) {
    std::string key = arg_str(op, 0);
    Operation vop{arg_str(op, 1), Value::array()};
    for (std::size_t i = 2; i < op.args.size(); ++i) vop.args.push_back(op.args.at(i));
    Value vstate = state.contains(key) ? state.at(key).at("v") : val->initial;
    Value m = Value::object();
    m["k"] = "apply";
    m["key"] = key;
    m["m"] = val->prepare(vop, vstate, ctx);
    m["L"] = Value::array();
    return m;
  };
  p->first.effect = [val, apply_to_entry](const Value& m,
                                          const Value& state) -> std::optional<Value> {
    Value out = state;
    std::string key = m.at("key").get<std::string>();
    if (!out.contains(key)) {
      Value entry = Value::object();
      entry["v"] = val->initial;
      entry["hd"] = Value::array();
      out[key] = std::move(entry);
    }
    Value& entry = out.at(key);
    for (const auto& e : m.at("L")) {
      Value dot = e.at("dot");
      if (!apply_to_entry(entry, e.at("m"), &dot)) return std::nullopt;
    }
    if (!apply_to_entry(entry, m.at("m"), nullptr)) return std::nullopt;
    return out;
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"homap"};
  p->second.prepare = [val](const Operation& op, const Value&, const PrepareCtx& ctx) {
    Operation vop{arg_str(op, 0), Value::array()};
    for (std::size_t i = 1; i < op.args.size(); ++i) vop.args.push_back(op.args.at(i));
    Value m = Value::object();
    m["k"] = "homap";
    m["dot"] = dot_json(ctx.replica, ctx.seq);
    m["m"] = val->prepare(vop, val->initial, ctx);
    return m;
  };
  p->second.effect = [apply_to_entry](const Value& m,
                                      const Value& state) -> std::optional<Value> {
    Value out = state;
    Value dot = m.at("dot");
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (!apply_to_entry(it.value(), m.at("m"), &dot)) return std::nullopt;
    }
    return out;
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("dot").at(0).get<std::string>();
  };

  // homap |> apply appends the homap to the apply's backlog, so keys the
  // apply initializes concurrently still receive it (dot-guarded).
  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    Value out = m1;
    Value entry = Value::object();
    entry["dot"] = m2.at("dot");
    entry["m"] = m2.at("m");
    out["L"].push_back(std::move(entry));
    return out;
  };

  p->message_equiv = [](const Value& a, const Value& b) {
    if (a.is_object() && b.is_object() && a.contains("L") && b.contains("L")) {
      return a.at("k") == b.at("k") && a.at("key") == b.at("key") &&
             a.at("m") == b.at("m") && dotted_seq_equiv(a.at("L"), b.at("L"));
    }
    return a == b;
  };
  return p;
}

// ----------------------------------------------------------- seq products

std::shared_ptr<Product> sequence_reverse_product() {
  auto p = std::make_shared<Product>();
  p->name = "seq-reverse";
  p->initial = Value::array();
  p->eval = seq_eval;
  p->first = sequence_component();

  p->second.ops = {"reverse"};
  p->second.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "reverse";
    return m;
  };
  p->second.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    if (m.at("k") == "id") return state;
    std::vector<Value> entries;
    for (const auto& e : state) {
      Value flipped = e;
      flipped["id"] = SeqId::from_json(e.at("id")).negated().to_json();
      entries.push_back(std::move(flipped));
    }
    std::sort(entries.begin(), entries.end(), seq_entry_less);
    return Value(entries);
  };
  p->second.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    if (m2.at("k") == "id" || m1.at("k") == "id") return m1;
    Value out = m1;
    out["id"] = SeqId::from_json(m1.at("id")).negated().to_json();
    return out;
  };

  Monoid m;
  Value ident = Value::object();
  ident["k"] = "id";
  Value rev = Value::object();
  rev["k"] = "reverse";
  m.identity = ident;
  m.compose = [ident, rev](const Value& a, const Value& b) {
    bool parity = (a.at("k") == "reverse") != (b.at("k") == "reverse");
    return parity ? rev : ident;
  };
  m.divide = [m_compose = m.compose](const Value& h, const Value& hp) -> std::optional<Value> {
    return m_compose(h, hp);  // every element is its own inverse
  };
  p->monoid = std::move(m);
  return p;
}

std::shared_ptr<Product> sequence_rremove_product() {
  auto p = std::make_shared<Product>();
  p->name = "seq-rremove";
  p->initial = Value::array();
  p->eval = seq_eval;
  p->first = sequence_component();

  auto in_range = [](const SeqId& id, const SeqId& lo, const SeqId& hi) {
    return !seq_id_less(id, lo) && !seq_id_less(hi, id);
  };

  p->second.ops = {"rremove"};
  p->second.prepare = [](const Operation& op, const Value& state, const PrepareCtx&) {
    long long i = arg_int(op, 0);
    long long j = arg_int(op, 1);
    if (i < 0 || j < i || static_cast<std::size_t>(j) >= state.size()) {
      throw ScenarioError("rremove range [" + std::to_string(i) + "," + std::to_string(j) +
                          "] invalid for length " + std::to_string(state.size()));
    }
    Value m = Value::object();
    m["k"] = "rremove";
    m["lo"] = state.at(static_cast<std::size_t>(i)).at("id");
    m["hi"] = state.at(static_cast<std::size_t>(j)).at("id");
    return m;
  };
  p->second.effect = [in_range](const Value& m, const Value& state) -> std::optional<Value> {
    SeqId lo = SeqId::from_json(m.at("lo"));
    SeqId hi = SeqId::from_json(m.at("hi"));
    Value out = Value::array();
    for (const auto& e : state) {
      if (!in_range(SeqId::from_json(e.at("id")), lo, hi)) out.push_back(e);
    }
    return out;
  };
  p->second.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  // A concurrent add landing inside the removed interval is erased; adds
  // outside it and removes pass through unchanged.
  p->act = [in_range](const Value& m2, const Value& m1) -> std::optional<Value> {
    if (m1.at("k") != "add") return m1;
    SeqId id = SeqId::from_json(m1.at("id"));
    if (in_range(id, SeqId::from_json(m2.at("lo")), SeqId::from_json(m2.at("hi")))) {
      Value out = Value::object();
      out["k"] = "id";
      return out;
    }
    return m1;
  };
  return p;
}

// -------------------------------------------------------------------- flags

std::shared_ptr<Product> enable_wins_flag() {
  auto p = std::make_shared<Product>();
  p->name = "ew-flag";
  p->initial = Value::array();  // surviving enable tokens
  p->eval = [](const Value&, const Value& state) {
    return Value(state.empty() ? "disabled" : "enabled");
  };

  p->first.ops = {"disable"};
  p->first.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "disable";
    m["S"] = Value::array();
    return m;
  };
  p->first.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    return arr_intersect(state, m.at("S"));
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"enable"};
  p->second.prepare = [](const Operation&, const Value&, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["k"] = "enable";
    m["tok"] = dot_json(ctx.replica, ctx.seq);
    return m;
  };
  p->second.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    return arr_insert_sorted(state, m.at("tok"));
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("tok").at(0).get<std::string>();
  };

  // enable |> disable shields the concurrent enable from the intersection
  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    Value out = m1;
    out["S"] = arr_insert_sorted(out.at("S"), m2.at("tok"));
    return out;
  };
  return p;
}

std::shared_ptr<Product> disable_wins_flag() {
  auto p = std::make_shared<Product>();
  p->name = "dw-flag";
  Value init = Value::object();
  init["d"] = Value::array();  // surviving disable tokens
  init["w"] = false;           // some enable ever applied
  p->initial = init;
  p->eval = [](const Value&, const Value& state) {
    bool enabled = state.at("w").get<bool>() && state.at("d").empty();
    return Value(enabled ? "enabled" : "disabled");
  };

  p->first.ops = {"enable"};
  p->first.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "enable";
    m["S"] = Value::array();
    return m;
  };
  p->first.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    Value out = state;
    out["d"] = arr_intersect(state.at("d"), m.at("S"));
    out["w"] = true;
    return out;
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"disable"};
  p->second.prepare = [](const Operation&, const Value&, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["k"] = "disable";
    m["tok"] = dot_json(ctx.replica, ctx.seq);
    return m;
  };
  p->second.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    Value out = state;
    out["d"] = arr_insert_sorted(state.at("d"), m.at("tok"));
    return out;
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("tok").at(0).get<std::string>();
  };

  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    Value out = m1;
    out["S"] = arr_insert_sorted(out.at("S"), m2.at("tok"));
    return out;
  };
  return p;
}

// -------------------------------------------------------------------- sets

namespace {

Value set_token(const Value& elem, const ReplicaId& r, std::uint64_t n) {
  Value t = Value::array();
  t.push_back(elem);
  t.push_back(r);
  t.push_back(n);
  return t;
}

}  // namespace

std::shared_ptr<Product> add_wins_set() {
  auto p = std::make_shared<Product>();
  p->name = "aw-set";
  p->initial = Value::array();  // surviving add tokens [elem, author, counter]
  p->eval = [](const Value&, const Value& state) {
    Value out = Value::array();
    for (const auto& t : state) out = arr_insert_sorted(out, t.at(0));
    return out;
  };

  p->first.ops = {"remove"};
  p->first.prepare = [](const Operation& op, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "remove";
    m["a"] = arg_str(op, 0);
    m["S"] = Value::array();
    return m;
  };
  p->first.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    Value out = Value::array();
    for (const auto& t : state) {
      if (t.at(0) != m.at("a") || arr_contains(m.at("S"), t)) out.push_back(t);
    }
    return out;
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"add"};
  p->second.prepare = [](const Operation& op, const Value&, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["k"] = "add";
    m["a"] = arg_str(op, 0);
    m["tok"] = set_token(Value(arg_str(op, 0)), ctx.replica, ctx.seq);
    return m;
  };
  p->second.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    return arr_insert_sorted(state, m.at("tok"));
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("tok").at(1).get<std::string>();
  };

  // add(a) |> remove(a) shields the concurrent add's token; other
  // elements' removes pass through untouched.
  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    if (m2.at("a") != m1.at("a")) return m1;
    Value out = m1;
    out["S"] = arr_insert_sorted(out.at("S"), m2.at("tok"));
    return out;
  };
  return p;
}

std::shared_ptr<Product> remove_wins_set() {
  auto p = std::make_shared<Product>();
  p->name = "rw-set";
  Value init = Value::object();
  init["R"] = Value::array();  // surviving remove tokens
  init["E"] = Value::array();  // elements ever added
  p->initial = init;
  p->eval = [](const Value&, const Value& state) {
    Value out = Value::array();
    for (const auto& e : state.at("E")) {
      bool removed = false;
      for (const auto& t : state.at("R")) {
        if (t.at(0) == e) {
          removed = true;
          break;
        }
      }
      if (!removed) out.push_back(e);
    }
    return out;
  };

  p->first.ops = {"add"};
  p->first.prepare = [](const Operation& op, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "add";
    m["a"] = arg_str(op, 0);
    m["S"] = Value::array();
    return m;
  };
  p->first.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    Value out = state;
    Value keep = Value::array();
    for (const auto& t : state.at("R")) {
      if (t.at(0) != m.at("a") || arr_contains(m.at("S"), t)) keep.push_back(t);
    }
    out["R"] = std::move(keep);
    out["E"] = arr_insert_sorted(out.at("E"), m.at("a"));
    return out;
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"remove"};
  p->second.prepare = [](const Operation& op, const Value&, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["k"] = "remove";
    m["a"] = arg_str(op, 0);
    m["tok"] = set_token(Value(arg_str(op, 0)), ctx.replica, ctx.seq);
    return m;
  };
  p->second.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    Value out = state;
    out["R"] = arr_insert_sorted(state.at("R"), m.at("tok"));
    return out;
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("tok").at(1).get<std::string>();
  };

  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    if (m2.at("a") != m1.at("a")) return m1;
    Value out = m1;
    out["S"] = arr_insert_sorted(out.at("S"), m2.at("tok"));
    return out;
  };
  return p;
}

// ------------------------------------------------------------------ resets

std::shared_ptr<Product> reset_wins(const CrdtInstance& wrapped) {
  if (!wrapped.payload_effect) throw Error("reset-wins requires a basic wrapped instance");
  auto w = std::make_shared<CrdtInstance>(wrapped);
  auto p = std::make_shared<Product>();
  p->name = "reset-wins:" + w->name;
  p->initial = w->initial;
  p->eval = [w](const Value& q, const Value& state) { return w->eval(q, state); };

  p->first.ops = w->ops;
  p->first.prepare = [w](const Operation& op, const Value& state, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["k"] = "m";
    m["m"] = w->prepare(op, state, ctx);
    return m;
  };
  p->first.effect = [w](const Value& m, const Value& state) -> std::optional<Value> {
    if (m.at("k") == "id") return state;
    return w->payload_effect(m.at("m"), state);
  };
  p->first.author = [w](const Value& m) -> std::optional<ReplicaId> {
    if (m.at("k") == "id") return std::nullopt;
    return w->author(m.at("m"));
  };

  p->second.ops = {"reset"};
  p->second.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "reset";
    return m;
  };
  p->second.effect = [w](const Value&, const Value&) -> std::optional<Value> {
    return w->initial;
  };
  p->second.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  // reset |> anything = id: concurrent messages are annihilated
  p->act = [](const Value&, const Value&) -> std::optional<Value> {
    Value out = Value::object();
    out["k"] = "id";
    return out;
  };
  return p;
}

std::shared_ptr<Product> observed_reset(const CrdtInstance& wrapped) {
  if (!wrapped.payload_effect) throw Error("observed-reset requires a basic wrapped instance");
  auto w = std::make_shared<CrdtInstance>(wrapped);
  auto p = std::make_shared<Product>();
  p->name = "obs-reset:" + w->name;
  Value init = Value::object();
  init["s"] = w->initial;
  init["L"] = Value::array();  // applied wrapped messages, delivery order
  p->initial = init;
  p->eval = [w](const Value& q, const Value& state) { return w->eval(q, state.at("s")); };

  p->first.ops = {"reset"};
  p->first.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "reset";
    m["L"] = Value::array();
    return m;
  };
  // reset(L) keeps exactly the logged messages named in L (the ones the
  // action marked concurrent) and replays them from scratch.
  p->first.effect = [w](const Value& m, const Value& state) -> std::optional<Value> {
    std::set<std::string> keep_dots;
    for (const auto& e : m.at("L")) keep_dots.insert(canonical(e.at("dot")));
    Value kept = Value::array();
    Value s = w->initial;
    for (const auto& e : state.at("L")) {
      if (!keep_dots.count(canonical(e.at("dot")))) continue;
      auto next = w->payload_effect(e.at("m"), s);
      if (!next) {
        throw ReplayUndefined("replay of retained message " + canonical(e) +
                              " undefined for '" + w->name + "'");
      }
      s = std::move(*next);
      kept.push_back(e);
    }
    Value out = Value::object();
    out["s"] = std::move(s);
    out["L"] = std::move(kept);
    return out;
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = w->ops;
  p->second.prepare = [w](const Operation& op, const Value& state, const PrepareCtx& ctx) {
    Value m = Value::object();
    m["dot"] = dot_json(ctx.replica, ctx.seq);
    m["m"] = w->prepare(op, state.at("s"), ctx);
    return m;
  };
  p->second.effect = [w](const Value& m, const Value& state) -> std::optional<Value> {
    auto next = w->payload_effect(m.at("m"), state.at("s"));
    if (!next) return std::nullopt;
    Value out = state;
    out["s"] = std::move(*next);
    out["L"].push_back(m);
    return out;
  };
  p->second.author = [](const Value& m) -> std::optional<ReplicaId> {
    return m.at("dot").at(0).get<std::string>();
  };

  // message |> reset(L) = reset(L ++ [message]): concurrent messages are
  // spared from the discard
  p->act = [](const Value& m2, const Value& m1) -> std::optional<Value> {
    Value out = m1;
    out["L"].push_back(m2);
    return out;
  };

  p->message_equiv = [](const Value& a, const Value& b) {
    if (a.is_object() && b.is_object() && a.contains("L") && b.contains("L")) {
      return dotted_seq_equiv(a.at("L"), b.at("L"));
    }
    return a == b;
  };
  // Concurrent wrapped messages may be logged in either order; states are
  // equivalent when the logs agree as dot-keyed sets and replay agrees.
  p->state_equiv = [](const Value& a, const Value& b) {
    auto sorted_log = [](const Value& st) {
      std::vector<Value> log(st.at("L").begin(), st.at("L").end());
      std::sort(log.begin(), log.end(), [](const Value& x, const Value& y) {
        return x.at("dot") < y.at("dot");
      });
      return log;
    };
    return a.at("s") == b.at("s") && sorted_log(a) == sorted_log(b);
  };
  return p;
}

// ------------------------------------------------------- negative controls

std::shared_ptr<Product> broken_enable_wins_flag() {
  auto p = std::make_shared<Product>();
  p->name = "broken-ew-flag";
  p->initial = Value("disabled");
  p->eval = [](const Value&, const Value& state) { return state; };

  p->first.ops = {"disable"};
  p->first.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "disable";
    return m;
  };
  p->first.effect = [](const Value& m, const Value& state) -> std::optional<Value> {
    if (m.at("k") == "id") return state;
    return Value("disabled");
  };
  p->first.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  p->second.ops = {"enable"};
  p->second.prepare = [](const Operation&, const Value&, const PrepareCtx&) {
    Value m = Value::object();
    m["k"] = "enable";
    return m;
  };
  p->second.effect = [](const Value&, const Value&) -> std::optional<Value> {
    return Value("enabled");
  };
  p->second.author = [](const Value&) { return std::optional<ReplicaId>{}; };

  // The first-attempt rule: a concurrent enable erases the disable
  // entirely. Still convergent, but double enable+disable ends enabled.
  p->act = [](const Value&, const Value&) -> std::optional<Value> {
    Value out = Value::object();
    out["k"] = "id";
    return out;
  };
  return p;
}

std::shared_ptr<Product> broken_addmult() {
  auto p = semiring_product(addmult_semiring());
  p->name = "broken-addmult";
  p->monoid.reset();
  // Identity action: concurrent multiplies no longer rewrite adds, so
  // replicas that saw the multiply first disagree with those that did not.
  p->act = [](const Value&, const Value& m1) -> std::optional<Value> { return m1; };
  return p;
}

// -------------------------------------------------- compact state variants

namespace {

/// make_instance, except no history is retained: concurrent acting
/// messages are reconstructed from the shared state itself. The
/// reconstructor returns raw second-component payloads whose dots are
/// concurrent to the incoming timestamp; fold order is irrelevant for
/// these products (token-set unions / order-insensitive logs).
CrdtInstance make_compact_instance(
    std::shared_ptr<const Product> p,
    std::function<std::vector<Value>(const Value& inner, const VectorClock& t)>
        concurrent_from_state) {
  CrdtInstance inst = make_instance(p);
  inst.name = p->name + "-compact";
  inst.effect = [p, concurrent_from_state](const TaggedMessage& msg,
                                           const Value& state) -> std::optional<Value> {
    auto st = SemidirectState::from_json(state);
    SemidirectState out = st;
    out.clock = vc_merge(st.clock, msg.timestamp);
    if (payload_component(msg.payload) == 2) {
      auto inner = p->second.effect(payload_body(msg.payload), st.inner);
      if (!inner) return std::nullopt;
      out.inner = std::move(*inner);
      return out.to_json();  // state doubles as the history: nothing retained
    }
    Value m = payload_body(msg.payload);
    for (const auto& m2 : concurrent_from_state(st.inner, msg.timestamp)) {
      auto next = p->act(m2, m);
      if (!next) return std::nullopt;
      m = std::move(*next);
    }
    auto inner = p->first.effect(m, st.inner);
    if (!inner) return std::nullopt;
    out.inner = std::move(*inner);
    return out.to_json();
  };
  inst.gen_op = nullptr;
  return inst;
}

// A dot (author, counter) is causally prior to t iff t covers it; with
// per-author total order this decides concurrency without full clocks.
bool dot_concurrent(const Value& dot_author, std::uint64_t dot_n, const VectorClock& t) {
  return dot_n > t.get(dot_author.get<std::string>());
}

}  // namespace

CrdtInstance enable_wins_flag_compact() {
  return make_compact_instance(enable_wins_flag(), [](const Value& inner,
                                                      const VectorClock& t) {
    std::vector<Value> out;
    for (const auto& tok : inner) {
      if (dot_concurrent(tok.at(0), tok.at(1).get<std::uint64_t>(), t)) {
        Value m = Value::object();
        m["k"] = "enable";
        m["tok"] = tok;
        out.push_back(std::move(m));
      }
    }
    return out;
  });
}

CrdtInstance add_wins_set_compact() {
  return make_compact_instance(add_wins_set(), [](const Value& inner,
                                                  const VectorClock& t) {
    std::vector<Value> out;
    for (const auto& tok : inner) {
      if (dot_concurrent(tok.at(1), tok.at(2).get<std::uint64_t>(), t)) {
        Value m = Value::object();
        m["k"] = "add";
        m["a"] = tok.at(0);
        m["tok"] = tok;
        out.push_back(std::move(m));
      }
    }
    return out;
  });
}

CrdtInstance observed_reset_compact(const CrdtInstance& wrapped) {
  return make_compact_instance(observed_reset(wrapped), [](const Value& inner,
                                                           const VectorClock& t) {
    std::vector<Value> out;
    for (const auto& e : inner.at("L")) {
      const auto& dot = e.at("dot");
      if (dot_concurrent(dot.at(0), dot.at(1).get<std::uint64_t>(), t)) out.push_back(e);
    }
    return out;
  });
}

// ------------------------------------------------------------------ registry

void Registry::add(CrdtInstance inst) {
  auto name = inst.name;
  if (!map_.emplace(name, std::move(inst)).second) {
    throw Error("instance '" + name + "' already registered");
  }
}

const CrdtInstance& Registry::get(const std::string& name) const {
  auto it = map_.find(name);
  if (it == map_.end()) throw UnknownInstance("no instance named '" + name + "'");
  return it->second;
}

bool Registry::has(const std::string& name) const { return map_.count(name) > 0; }

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : map_) out.push_back(k);
  return out;
}

namespace {

Operation gen_two_op(Rng& rng, const std::string& op1, long long lo1, long long hi1,
                     const std::string& op2, long long lo2, long long hi2,
                     std::optional<long long> exclude2) {
  if (rng.below(2) == 0) return Operation{op1, Value::array({rng.range(lo1, hi1)})};
  long long v = rng.range(lo2, hi2);
  while (exclude2 && v == *exclude2) v = rng.range(lo2, hi2);
  return Operation{op2, Value::array({v})};
}

CrdtInstance registered_semiring(const SemiringSpec& spec) {
  CrdtInstance inst = make_instance(semiring_product(spec));
  auto s = std::make_shared<SemiringSpec>(spec);
  inst.gen_op = [s](Rng& rng, const Value&, const ReplicaId&) {
    return gen_two_op(rng, s->op1, s->gen1_lo, s->gen1_hi, s->op2, s->gen2_lo, s->gen2_hi,
                      s->gen2_exclude);
  };
  return inst;
}

Operation gen_set_op(Rng& rng, const std::string& add_op, const std::string& remove_op) {
  static const char* pool[] = {"x", "y", "z"};
  const char* e = pool[rng.below(3)];
  return Operation{rng.below(2) == 0 ? add_op : remove_op, Value::array({e})};
}

Operation gen_flag_op(Rng& rng) {
  return Operation{rng.below(2) == 0 ? "enable" : "disable", Value::array()};
}

Operation gen_map_op(Rng& rng) {
  static const char* keys[] = {"alpha", "beta", "gamma"};
  static const char* vals[] = {"a", "b", "c", "d", "e"};
  if (rng.below(4) == 0) return Operation{"homap", Value::array({"add", vals[rng.below(5)]})};
  return Operation{"apply", Value::array({keys[rng.below(3)], "add", vals[rng.below(5)]})};
}

Operation gen_reset_wrapped_op(Rng& rng) {
  if (rng.below(4) == 0) return Operation{"reset", Value::array()};
  return Operation{"add", Value::array({rng.range(-5, 5)})};
}

void build_default(Registry& reg) {
  reg.add(counter_instance());
  reg.add(gset_instance());
  reg.add(sequence_instance());

  reg.add(registered_semiring(addmult_semiring()));
  reg.add(registered_semiring(minplus_semiring()));
  reg.add(registered_semiring(maxmin_semiring()));
  reg.add(registered_semiring(minmax_semiring()));

  {
    CrdtInstance inst = make_instance(map_homap_product(gset_instance()));
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) { return gen_map_op(rng); };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(sequence_reverse_product());
    inst.gen_op = [](Rng& rng, const Value& state, const ReplicaId&) {
      if (rng.below(5) == 0) return Operation{"reverse", Value::array()};
      return gen_seq_op(rng, state.at("s"), true);
    };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(sequence_rremove_product());
    inst.gen_op = [](Rng& rng, const Value& state, const ReplicaId&) {
      const Value& inner = state.at("s");
      if (!inner.empty() && rng.below(5) == 0) {
        std::uint64_t i = rng.below(inner.size());
        std::uint64_t j = i + rng.below(inner.size() - i);
        return Operation{"rremove", Value::array({i, j})};
      }
      return gen_seq_op(rng, inner, true);
    };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(enable_wins_flag());
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) { return gen_flag_op(rng); };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(disable_wins_flag());
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) { return gen_flag_op(rng); };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(add_wins_set());
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
      return gen_set_op(rng, "add", "remove");
    };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(remove_wins_set());
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
      return gen_set_op(rng, "add", "remove");
    };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(reset_wins(counter_instance()));
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
      return gen_reset_wrapped_op(rng);
    };
    reg.add(std::move(inst));
  }
  {
    CrdtInstance inst = make_instance(observed_reset(counter_instance()));
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) {
      return gen_reset_wrapped_op(rng);
    };
    reg.add(std::move(inst));
  }
}

}  // namespace

Registry& default_registry() {
  static Registry reg = [] {
    Registry r;
    build_default(r);
    return r;
  }();
  return reg;
}

void register_negative_controls(Registry& reg) {
  if (reg.has("broken-ew-flag")) return;
  {
    CrdtInstance inst = make_instance(broken_enable_wins_flag());
    inst.gen_op = [](Rng& rng, const Value&, const ReplicaId&) { return gen_flag_op(rng); };
    reg.add(std::move(inst));
  }
  {
    auto spec = addmult_semiring();
    CrdtInstance inst = make_instance(broken_addmult());
    auto s = std::make_shared<SemiringSpec>(spec);
    inst.gen_op = [s](Rng& rng, const Value&, const ReplicaId&) {
      return gen_two_op(rng, s->op1, s->gen1_lo, s->gen1_hi, s->op2, s->gen2_lo,
                        s->gen2_hi, s->gen2_exclude);
    };
    reg.add(std::move(inst));
  }
}

std::vector<std::string> convergent_instance_names() {
  return {"addmult",  "aw-set",  "counter", "dw-flag",  "ew-flag",
          "gset",     "map-homap", "maxmin", "minmax",   "minplus",
          "obs-reset:counter", "reset-wins:counter", "rw-set", "seq",
          "seq-reverse", "seq-rremove"};
}

}  // namespace sdp
