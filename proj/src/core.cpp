#include <sdp/core.hpp>

#include <algorithm>

namespace sdp {

bool VectorClock::leq(const VectorClock& o) const {
  for (const auto& [r, n] : entries_) {
    if (n > o.get(r)) return false;
  }
  return true;
}

std::uint64_t VectorClock::sum() const {
  std::uint64_t s = 0;
  for (const auto& [r, n] : entries_) s += n;
  return s;
}

Value VectorClock::to_json() const {
  Value v = Value::object();
  for (const auto& [r, n] : entries_) v[r] = n;
  return v;
}

VectorClock VectorClock::from_json(const Value& v) {
  VectorClock c;
  for (auto it = v.begin(); it != v.end(); ++it) {
    c.set(it.key(), it.value().get<std::uint64_t>());
  }
  return c;
}

VectorClock vc_increment(const VectorClock& t, const ReplicaId& r) {
  VectorClock out = t;
  out.set(r, t.get(r) + 1);
  return out;
}

VectorClock vc_merge(const VectorClock& a, const VectorClock& b) {
  VectorClock out = a;
  for (const auto& [r, n] : b.entries()) {
    out.set(r, std::max(out.get(r), n));
  }
  return out;
}

CausalRelation vc_compare(const VectorClock& a, const VectorClock& b) {
  bool le = a.leq(b);
  bool ge = b.leq(a);
  if (le && ge) return CausalRelation::Equal;
  if (le) return CausalRelation::Before;
  if (ge) return CausalRelation::After;
  return CausalRelation::Concurrent;
}

bool causal_deliverable(const VectorClock& msg_ts, const ReplicaId& sender,
                        const VectorClock& local) {
  if (msg_ts.get(sender) == 0) {
    throw Error("causal_deliverable: message timestamp lacks a sender entry");
  }
  if (local.get(sender) + 1 != msg_ts.get(sender)) return false;
  for (const auto& [r, n] : msg_ts.entries()) {
    if (r == sender) continue;
    if (local.get(r) < n) return false;
  }
  return true;
}

Value TaggedMessage::to_json() const {
  Value v = Value::object();
  v["payload"] = payload;
  v["ts"] = timestamp.to_json();
  v["author"] = author;
  return v;
}

TaggedMessage TaggedMessage::from_json(const Value& v) {
  TaggedMessage m;
  m.payload = v.at("payload");
  m.timestamp = VectorClock::from_json(v.at("ts"));
  m.author = v.at("author").get<std::string>();
  return m;
}

bool CrdtInstance::has_op(const std::string& op) const {
  return std::find(ops.begin(), ops.end(), op) != ops.end();
}

bool CrdtInstance::states_equal(const Value& a, const Value& b) const {
  if (state_equiv) return state_equiv(a, b);
  return a == b;
}

std::optional<TaggedMessage> replica_step(const CrdtInstance& inst, Value& state,
                                          VectorClock& clock, const ReplicaId& id,
                                          const ReplicaEvent& ev) {
  if (const auto* local = std::get_if<LocalOp>(&ev)) {
    if (!inst.has_op(local->op.name)) {
      throw UnknownOperation("instance '" + inst.name + "' has no operation '" +
                             local->op.name + "'");
    }
    VectorClock ts = vc_increment(clock, id);
    PrepareCtx ctx{id, ts.get(id)};
    TaggedMessage msg{inst.prepare(local->op, state, ctx), ts, id};
    auto next = inst.effect(msg, state);
    if (!next) {
      throw UndefinedEffect("self-effect undefined for op '" + local->op.name +
                            "' at replica " + id + " on state " + canonical(state));
    }
    state = *next;
    clock = ts;
    return msg;
  }
  const auto& msg = std::get<Receive>(ev).msg;
  if (!causal_deliverable(msg.timestamp, msg.author, clock)) {
    throw NonCausalDelivery("message " + canonical(msg.timestamp.to_json()) +
                            " from " + msg.author + " not deliverable at " + id +
                            " with clock " + canonical(clock.to_json()));
  }
  auto next = inst.effect(msg, state);
  if (!next) {
    throw UndefinedEffect("effect undefined for message " + canonical(msg.payload) +
                          " at replica " + id + " on state " + canonical(state));
  }
  state = *next;
  clock = vc_merge(clock, msg.timestamp);
  return std::nullopt;
}

std::optional<TaggedMessage> Replica::step(const ReplicaEvent& ev) {
  return replica_step(*instance, state, clock, id, ev);
}

Value Replica::query(const Value& q) const { return instance->eval(q, state); }

}  // namespace sdp
