#include <sdp/semidirect.hpp>

#include <algorithm>
#include <tuple>

namespace sdp {

bool Component::has_op(const std::string& op) const {
  return std::find(ops.begin(), ops.end(), op) != ops.end();
}

bool Product::messages_equal(const Value& a, const Value& b) const {
  // Component-tagged payloads compare by tag plus body so instance-level
  // equivalences apply whether or not the envelope tag is present.
  if (a.is_object() && b.is_object() && a.size() == 2 && b.size() == 2 &&
      a.contains("c") && a.contains("m") && b.contains("c") && b.contains("m")) {
    return a.at("c") == b.at("c") && messages_equal(a.at("m"), b.at("m"));
  }
  if (message_equiv) return message_equiv(a, b);
  return a == b;
}

bool Product::inner_states_equal(const Value& a, const Value& b) const {
  if (state_equiv) return state_equiv(a, b);
  return a == b;
}

Value SemidirectState::to_json() const {
  Value v = Value::object();
  v["s"] = inner;
  v["t"] = clock.to_json();
  Value h = Value::array();
  for (const auto& e : history) h.push_back(e.to_json());
  v["h"] = h;
  return v;
}

SemidirectState SemidirectState::from_json(const Value& v) {
  SemidirectState st;
  st.inner = v.at("s");
  st.clock = VectorClock::from_json(v.at("t"));
  for (const auto& e : v.at("h")) st.history.push_back(TaggedMessage::from_json(e));
  return st;
}

Value tag_payload(int component, Value payload) {
  Value v = Value::object();
  v["c"] = component;
  v["m"] = std::move(payload);
  return v;
}

int payload_component(const Value& tagged) { return tagged.at("c").get<int>(); }

const Value& payload_body(const Value& tagged) { return tagged.at("m"); }

TaggedMessage sp_prepare(const Product& p, const Operation& op,
                         const SemidirectState& st, const ReplicaId& r) {
  VectorClock ts = vc_increment(st.clock, r);
  PrepareCtx ctx{r, ts.get(r)};
  Value payload;
  if (p.first.has_op(op.name)) {
    payload = tag_payload(1, p.first.prepare(op, st.inner, ctx));
  } else if (p.second.has_op(op.name)) {
    payload = tag_payload(2, p.second.prepare(op, st.inner, ctx));
  } else {
    throw UnknownOperation("product '" + p.name + "' has no operation '" + op.name + "'");
  }
  return TaggedMessage{std::move(payload), std::move(ts), r};
}

namespace {

// Linear extension of the causal order: timestamp sums strictly increase
// along causality, so sorting by (sum, author, counter) orders causally
// related entries correctly and breaks concurrent ties deterministically.
std::vector<TaggedMessage> concurrent_in_causal_order(
    const std::vector<TaggedMessage>& history, const VectorClock& t_prime) {
  std::vector<TaggedMessage> out;
  for (const auto& e : history) {
    if (vc_compare(e.timestamp, t_prime) == CausalRelation::Concurrent) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const TaggedMessage& a, const TaggedMessage& b) {
    auto ka = std::tuple(a.timestamp.sum(), a.author, a.timestamp.get(a.author));
    auto kb = std::tuple(b.timestamp.sum(), b.author, b.timestamp.get(b.author));
    return ka < kb;
  });
  return out;
}

// Keeps history sorted by (author, counter); rejects duplicate dots.
void insert_history(std::vector<TaggedMessage>& history, const TaggedMessage& msg) {
  Dot d = msg.dot();
  auto pos = std::lower_bound(history.begin(), history.end(), d,
                              [](const TaggedMessage& e, const Dot& key) {
                                return e.dot() < key;
                              });
  if (pos != history.end() && pos->dot() == d) return;
  TaggedMessage entry{msg.payload, msg.timestamp, msg.author};
  history.insert(pos, std::move(entry));
}

}  // namespace

std::optional<Value> compute_m_act(const Product& p, const Value& m1,
                                   const VectorClock& t_prime,
                                   const std::vector<TaggedMessage>& history) {
  Value m = m1;
  for (const auto& e : concurrent_in_causal_order(history, t_prime)) {
    auto next = p.act(payload_body(e.payload), m);
    if (!next) return std::nullopt;
    m = std::move(*next);
  }
  return m;
}

std::optional<SemidirectState> sp_effect(const Product& p, const TaggedMessage& msg,
                                         const SemidirectState& st) {
  SemidirectState out = st;
  out.clock = vc_merge(st.clock, msg.timestamp);
  if (payload_component(msg.payload) == 2) {
    auto inner = p.second.effect(payload_body(msg.payload), st.inner);
    if (!inner) return std::nullopt;
    out.inner = std::move(*inner);
    insert_history(out.history, msg);
    return out;
  }
  auto m_act = compute_m_act(p, payload_body(msg.payload), msg.timestamp, st.history);
  if (!m_act) return std::nullopt;
  auto inner = p.first.effect(*m_act, st.inner);
  if (!inner) return std::nullopt;
  out.inner = std::move(*inner);
  return out;
}

Value sp_eval(const Product& p, const Value& query, const SemidirectState& st) {
  return p.eval(query, st.inner);
}

SemidirectState prune_stable(const SemidirectState& st, const VectorClock& frontier) {
  SemidirectState out;
  out.inner = st.inner;
  out.clock = st.clock;
  for (const auto& e : st.history) {
    if (!e.timestamp.leq(frontier)) out.history.push_back(e);
  }
  return out;
}

Value CompressedState::to_json() const {
  Value v = Value::object();
  v["s"] = inner;
  v["h"] = composed;
  return v;
}

CompressedState CompressedState::from_json(const Value& v, const Value&) {
  CompressedState st;
  st.inner = v.at("s");
  st.composed = v.at("h");
  return st;
}

TaggedMessage comp_prepare(const Product& p, const Operation& op,
                           const CompressedState& st, const ReplicaId& r) {
  if (!p.monoid) throw Error("product '" + p.name + "' has no compression monoid");
  VectorClock ts;
  ts.set(r, 1);  // standalone prepare; the replica protocol stamps real clocks
  PrepareCtx ctx{r, 1};
  Value payload;
  if (p.first.has_op(op.name)) {
    payload = tag_payload(1, p.first.prepare(op, st.inner, ctx));
    payload["h"] = st.composed;
  } else if (p.second.has_op(op.name)) {
    payload = tag_payload(2, p.second.prepare(op, st.inner, ctx));
  } else {
    throw UnknownOperation("product '" + p.name + "' has no operation '" + op.name + "'");
  }
  return TaggedMessage{std::move(payload), std::move(ts), r};
}

std::optional<CompressedState> comp_effect(const Product& p, const TaggedMessage& msg,
                                           const CompressedState& st) {
  if (!p.monoid) throw Error("product '" + p.name + "' has no compression monoid");
  CompressedState out = st;
  if (payload_component(msg.payload) == 2) {
    auto inner = p.second.effect(payload_body(msg.payload), st.inner);
    if (!inner) return std::nullopt;
    out.inner = std::move(*inner);
    out.composed = p.monoid->compose(payload_body(msg.payload), st.composed);
    return out;
  }
  auto quotient = p.monoid->divide(st.composed, msg.payload.at("h"));
  if (!quotient) {
    throw DivisionUndefined("cannot divide " + canonical(st.composed) + " by " +
                            canonical(msg.payload.at("h")) + " in product '" + p.name +
                            "'");
  }
  auto m_act = p.act(*quotient, payload_body(msg.payload));
  if (!m_act) return std::nullopt;
  auto inner = p.first.effect(*m_act, st.inner);
  if (!inner) return std::nullopt;
  out.inner = std::move(*inner);
  return out;
}

bool check_reordering(const Product& p, const Value& state, const Value& m1,
                      const Value& m2) {
  auto after_m1 = p.first.effect(m1, state);
  auto after_m2 = p.second.effect(m2, state);
  if (!after_m1 || !after_m2) return false;
  auto lhs = p.second.effect(m2, *after_m1);
  auto transformed = p.act(m2, m1);
  if (!lhs || !transformed) return false;
  auto rhs = p.first.effect(*transformed, *after_m2);
  if (!rhs) return false;
  return p.inner_states_equal(*lhs, *rhs);
}

bool check_action_commutes(const Product& p, const Value& m1, const Value& m2,
                           const Value& m2b) {
  auto inner_a = p.act(m2b, m1);
  auto inner_b = p.act(m2, m1);
  if (!inner_a || !inner_b) return false;
  auto lhs = p.act(m2, *inner_a);
  auto rhs = p.act(m2b, *inner_b);
  if (!lhs || !rhs) return false;
  return p.messages_equal(*lhs, *rhs);
}

bool check_preserves_authors(const Product& p, const Value& m1,
                             const ReplicaId& m1_author, const Value& m2) {
  auto transformed = p.act(m2, m1);
  if (!transformed) return false;
  auto authors = p.first.author(*transformed);
  return !authors || *authors == m1_author;
}

namespace {

Value route_prepare(const Product& p, const Operation& op, const Value& inner,
                    const PrepareCtx& ctx) {
  if (p.first.has_op(op.name)) return tag_payload(1, p.first.prepare(op, inner, ctx));
  if (p.second.has_op(op.name)) return tag_payload(2, p.second.prepare(op, inner, ctx));
  throw UnknownOperation("product '" + p.name + "' has no operation '" + op.name + "'");
}

std::optional<ReplicaId> route_author(const Product& p, const Value& tagged) {
  return payload_component(tagged) == 1 ? p.first.author(payload_body(tagged))
                                        : p.second.author(payload_body(tagged));
}

}  // namespace

CrdtInstance make_instance(std::shared_ptr<const Product> p) {
  CrdtInstance inst;
  inst.name = p->name;
  inst.initial = SemidirectState{p->initial, {}, {}}.to_json();
  inst.ops = p->first.ops;
  inst.ops.insert(inst.ops.end(), p->second.ops.begin(), p->second.ops.end());
  inst.prepare = [p](const Operation& op, const Value& state, const PrepareCtx& ctx) {
    return route_prepare(*p, op, state.at("s"), ctx);
  };
  inst.effect = [p](const TaggedMessage& msg, const Value& state) -> std::optional<Value> {
    auto st = SemidirectState::from_json(state);
    auto next = sp_effect(*p, msg, st);
    if (!next) return std::nullopt;
    return next->to_json();
  };
  inst.eval = [p](const Value& query, const Value& state) {
    return p->eval(query, state.at("s"));
  };
  inst.author = [p](const Value& payload) { return route_author(*p, payload); };
  inst.prune = [p](const Value& state, const VectorClock& frontier) {
    return prune_stable(SemidirectState::from_json(state), frontier).to_json();
  };
  inst.history_size = [](const Value& state) { return state.at("h").size(); };
  if (p->state_equiv) {
    auto inner_eq = p->state_equiv;
    inst.state_equiv = [inner_eq](const Value& a, const Value& b) {
      return a.at("t") == b.at("t") && a.at("h") == b.at("h") &&
             inner_eq(a.at("s"), b.at("s"));
    };
  }
  inst.product = std::move(p);
  return inst;
}

CrdtInstance make_compressed_instance(std::shared_ptr<const Product> p) {
  if (!p->monoid) {
    throw SuiteNotApplicable("product '" + p->name + "' has no compression monoid");
  }
  CrdtInstance inst;
  inst.name = p->name + "-compressed";
  inst.initial = CompressedState{p->initial, p->monoid->identity}.to_json();
  inst.ops = p->first.ops;
  inst.ops.insert(inst.ops.end(), p->second.ops.begin(), p->second.ops.end());
  inst.prepare = [p](const Operation& op, const Value& state, const PrepareCtx& ctx) {
    Value payload = route_prepare(*p, op, state.at("s"), ctx);
    if (payload_component(payload) == 1) payload["h"] = state.at("h");
    return payload;
  };
  inst.effect = [p](const TaggedMessage& msg, const Value& state) -> std::optional<Value> {
    auto st = CompressedState::from_json(state, p->monoid->identity);
    auto next = comp_effect(*p, msg, st);
    if (!next) return std::nullopt;
    return next->to_json();
  };
  inst.eval = [p](const Value& query, const Value& state) {
    return p->eval(query, state.at("s"));
  };
  inst.author = [p](const Value& payload) { return route_author(*p, payload); };
  inst.history_size = [](const Value&) -> std::size_t { return 1; };
  if (p->state_equiv) {
    auto inner_eq = p->state_equiv;
    inst.state_equiv = [inner_eq](const Value& a, const Value& b) {
      return a.at("h") == b.at("h") && inner_eq(a.at("s"), b.at("s"));
    };
  }
  inst.product = std::move(p);
  return inst;
}

}  // namespace sdp
