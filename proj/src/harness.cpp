#include <sdp/harness.hpp>
#include <sdp/semidirect.hpp>

#include <algorithm>

namespace sdp {

// ---------------------------------------------------------------- scenario

Value event_to_json(const ScenarioEvent& ev) {
  Value v = Value::object();
  if (const auto* op = std::get_if<OpEvent>(&ev)) {
    v["type"] = "op";
    v["replica"] = op->replica;
    v["op"] = op->op.name;
    v["args"] = op->op.args;
  } else if (const auto* d = std::get_if<DeliverEvent>(&ev)) {
    v["type"] = "deliver";
    v["to"] = d->to;
    v["msg"] = d->msg;
  } else {
    v["type"] = "deliver_all";
  }
  return v;
}

ScenarioEvent event_from_json(const Value& v) {
  if (!v.is_object() || !v.contains("type") || !v.at("type").is_string()) {
    throw ScenarioError("event must be an object with a string \"type\": " + canonical(v));
  }
  const std::string type = v.at("type").get<std::string>();
  if (type == "op") {
    OpEvent ev;
    if (!v.contains("replica") || !v.at("replica").is_string())
      throw ScenarioError("op event needs a string \"replica\": " + canonical(v));
    if (!v.contains("op") || !v.at("op").is_string())
      throw ScenarioError("op event needs a string \"op\": " + canonical(v));
    ev.replica = v.at("replica").get<std::string>();
    ev.op.name = v.at("op").get<std::string>();
    ev.op.args = v.contains("args") ? v.at("args") : Value::array();
    if (!ev.op.args.is_array())
      throw ScenarioError("op event \"args\" must be an array: " + canonical(v));
    return ev;
  }
  if (type == "deliver") {
    DeliverEvent ev;
    if (!v.contains("to") || !v.at("to").is_string())
      throw ScenarioError("deliver event needs a string \"to\": " + canonical(v));
    if (!v.contains("msg") || !v.at("msg").is_number_unsigned())
      throw ScenarioError("deliver event needs a non-negative \"msg\" index: " + canonical(v));
    ev.to = v.at("to").get<std::string>();
    ev.msg = v.at("msg").get<std::size_t>();
    return ev;
  }
  if (type == "deliver_all") return DeliverAllEvent{};
  throw ScenarioError("unknown event type '" + type + "'");
}

Value Scenario::to_json() const {
  Value v = Value::object();
  v["instance"] = instance;
  v["replicas"] = replicas;
  v["seed"] = seed;
  Value evs = Value::array();
  for (const auto& e : events) evs.push_back(event_to_json(e));
  v["events"] = std::move(evs);
  return v;
}

Scenario Scenario::from_json(const Value& v) {
  if (!v.is_object()) throw ScenarioError("scenario document must be a JSON object");
  Scenario sc;
  if (!v.contains("instance") || !v.at("instance").is_string())
    throw ScenarioError("scenario needs a string \"instance\"");
  sc.instance = v.at("instance").get<std::string>();
  if (!v.contains("replicas") || !v.at("replicas").is_array() || v.at("replicas").empty())
    throw ScenarioError("scenario needs a non-empty \"replicas\" array");
  for (const auto& r : v.at("replicas")) {
    if (!r.is_string()) throw ScenarioError("replica ids must be strings");
    sc.replicas.push_back(r.get<std::string>());
  }
  {
    std::set<ReplicaId> uniq(sc.replicas.begin(), sc.replicas.end());
    if (uniq.size() != sc.replicas.size())
      throw ScenarioError("replica ids must be distinct");
  }
  if (v.contains("seed")) {
    if (!v.at("seed").is_number_unsigned())
      throw ScenarioError("scenario \"seed\" must be a non-negative integer");
    sc.seed = v.at("seed").get<std::uint64_t>();
  }
  if (!v.contains("events") || !v.at("events").is_array())
    throw ScenarioError("scenario needs an \"events\" array");
  std::size_t i = 0;
  for (const auto& e : v.at("events")) {
    try {
      sc.events.push_back(event_from_json(e));
    } catch (const ScenarioError& err) {
      throw ScenarioError("events[" + std::to_string(i) + "]: " + err.what());
    }
    ++i;
  }
  return sc;
}

// ------------------------------------------------------------------- trace

Value Trace::to_json() const {
  Value v = Value::object();
  v["scenario"] = scenario.to_json();
  Value msgs = Value::array();
  for (const auto& m : messages) msgs.push_back(m.to_json());
  v["messages"] = std::move(msgs);
  Value steps_json = Value::array();
  for (const auto& s : steps) {
    Value sv = Value::object();
    sv["event"] = s.event;
    sv["replica"] = s.replica;
    sv["emitted"] = s.emitted ? Value(*s.emitted) : Value(nullptr);
    sv["evals"] = s.evals;
    sv["history"] = s.history;
    steps_json.push_back(std::move(sv));
  }
  v["steps"] = std::move(steps_json);
  Value fin = Value::object();
  Value fevals = Value::object();
  Value fstates = Value::object();
  Value fclocks = Value::object();
  for (const auto& [r, st] : final_states) fstates[r] = st;
  for (const auto& [r, ev] : final_evals) fevals[r] = ev;
  for (const auto& [r, c] : final_clocks) fclocks[r] = c.to_json();
  fin["states"] = std::move(fstates);
  fin["evals"] = std::move(fevals);
  fin["clocks"] = std::move(fclocks);
  v["final"] = std::move(fin);
  return v;
}

namespace {

// Live state of one run. Message delivery is tracked per message so
// explicit deliver events can be validated and drains know what remains.
struct Runtime {
  const CrdtInstance& inst;
  std::vector<ReplicaId> order;          // scenario order, for snapshots
  std::map<ReplicaId, Replica> reps;
  std::vector<TaggedMessage> msgs;
  std::vector<std::set<ReplicaId>> seen;  // per message, replicas holding it

  explicit Runtime(const CrdtInstance& instance, const Scenario& sc) : inst(instance) {
    for (const auto& r : sc.replicas) {
      order.push_back(r);
      reps.emplace(r, Replica(r, inst));
    }
  }

  Replica& at(const ReplicaId& r) {
    auto it = reps.find(r);
    if (it == reps.end()) throw ScenarioError("unknown replica '" + r + "'");
    return it->second;
  }

  bool pending() const {
    for (const auto& s : seen)
      if (s.size() < reps.size()) return true;
    return false;
  }

  VectorClock frontier() const {
    VectorClock f;
    bool first = true;
    auto meet = [&](const VectorClock& c) {
      if (first) {
        f = c;
        first = false;
        return;
      }
      VectorClock out;
      for (const auto& [r, n] : f.entries()) out.set(r, std::min(n, c.get(r)));
      f = out;
    };
    for (const auto& [id, rep] : reps) meet(rep.clock);
    for (std::size_t i = 0; i < msgs.size(); ++i) {
      if (seen[i].size() < reps.size()) meet(msgs[i].timestamp);
    }
    return f;
  }

  Value eval_snapshot() {
    Value out = Value::object();
    for (const auto& [id, rep] : reps) out[id] = rep.query();
    return out;
  }

  Value history_snapshot() {
    Value out = Value::object();
    for (const auto& [id, rep] : reps) out[id] = inst.history_size(rep.state);
    return out;
  }
};

void prune_all(Runtime& rt) {
  VectorClock f = rt.frontier();
  for (auto& [id, rep] : rt.reps) rep.state = rt.inst.prune(rep.state, f);
}

TraceStep record_step(Runtime& rt, Value event, const ReplicaId& acting,
                      std::optional<std::size_t> emitted) {
  TraceStep s;
  s.event = std::move(event);
  s.replica = acting;
  s.emitted = emitted;
  s.evals = rt.eval_snapshot();
  s.history = rt.history_snapshot();
  return s;
}

void do_deliver(Runtime& rt, Trace& trace, const ReplicaId& to, std::size_t idx) {
  if (idx >= rt.msgs.size())
    throw ScenarioError("deliver references message " + std::to_string(idx) +
                        " but only " + std::to_string(rt.msgs.size()) + " exist");
  if (rt.seen[idx].count(to))
    throw ScenarioError("message " + std::to_string(idx) + " already delivered to '" + to +
                        "'");
  rt.at(to).step(Receive{rt.msgs[idx]});
  rt.seen[idx].insert(to);
  Value ev = Value::object();
  ev["type"] = "deliver";
  ev["to"] = to;
  ev["msg"] = idx;
  trace.steps.push_back(record_step(rt, std::move(ev), to, std::nullopt));
}

void drain_all(Runtime& rt, Trace& trace, Rng& rng) {
  while (rt.pending()) {
    bool progressed = false;
    for (const auto& id : rt.order) {
      Replica& rep = rt.reps.at(id);
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < rt.msgs.size(); ++i) {
        if (rt.seen[i].count(id)) continue;
        if (causal_deliverable(rt.msgs[i].timestamp, rt.msgs[i].author, rep.clock))
          candidates.push_back(i);
      }
      if (candidates.empty()) continue;
      std::size_t pick = candidates[rng.below(candidates.size())];
      do_deliver(rt, trace, id, pick);
      progressed = true;
    }
    if (!progressed) {
      throw ScenarioError("deliver_all stalled: pending messages are undeliverable");
    }
  }
}

}  // namespace

Trace run_scenario(const CrdtInstance& inst, const Scenario& sc, const RunOptions& opts) {
  Runtime rt(inst, sc);
  Trace trace;
  trace.scenario = sc;
  Rng drain_rng(sc.seed);
  for (const auto& ev : sc.events) {
    if (const auto* op = std::get_if<OpEvent>(&ev)) {
      auto msg = rt.at(op->replica).step(LocalOp{op->op});
      rt.msgs.push_back(*msg);
      rt.seen.push_back({op->replica});
      trace.steps.push_back(
          record_step(rt, event_to_json(ev), op->replica, rt.msgs.size() - 1));
    } else if (const auto* d = std::get_if<DeliverEvent>(&ev)) {
      do_deliver(rt, trace, d->to, d->msg);
    } else {
      drain_all(rt, trace, drain_rng);
    }
    if (opts.prune_every > 0 && trace.steps.size() % opts.prune_every == 0) {
      prune_all(rt);
    }
  }
  if (opts.prune_every > 0) prune_all(rt);
  trace.messages = rt.msgs;
  for (const auto& [id, rep] : rt.reps) {
    trace.final_states[id] = rep.state;
    trace.final_evals[id] = rep.query();
    trace.final_clocks[id] = rep.clock;
  }
  return trace;
}

Trace run_scenario(const Registry& reg, const Scenario& sc, const RunOptions& opts) {
  return run_scenario(reg.get(sc.instance), sc, opts);
}

bool check_convergence(const Trace& trace) {
  std::string ref;
  bool first = true;
  for (const auto& [r, ev] : trace.final_evals) {
    std::string c = canonical(ev);
    if (first) {
      ref = std::move(c);
      first = false;
    } else if (c != ref) {
      return false;
    }
  }
  return true;
}

VectorClock stability_frontier(const Trace& trace, std::size_t step) {
  if (step > trace.steps.size())
    throw ScenarioError("step " + std::to_string(step) + " outside trace");
  std::map<ReplicaId, VectorClock> clocks;
  for (const auto& r : trace.scenario.replicas) clocks[r];
  std::map<std::size_t, std::set<ReplicaId>> seen;
  for (std::size_t i = 0; i < step; ++i) {
    const TraceStep& s = trace.steps[i];
    if (s.emitted) {
      clocks[s.replica] = trace.messages[*s.emitted].timestamp;
      seen[*s.emitted].insert(s.replica);
    } else {
      std::size_t idx = s.event.at("msg").get<std::size_t>();
      clocks[s.replica] = vc_merge(clocks[s.replica], trace.messages[idx].timestamp);
      seen[idx].insert(s.replica);
    }
  }
  VectorClock f;
  bool first = true;
  auto meet = [&](const VectorClock& c) {
    if (first) {
      f = c;
      first = false;
      return;
    }
    VectorClock out;
    for (const auto& [r, n] : f.entries()) out.set(r, std::min(n, c.get(r)));
    f = out;
  };
  for (const auto& [r, c] : clocks) meet(c);
  for (const auto& [idx, holders] : seen) {
    if (holders.size() < trace.scenario.replicas.size())
      meet(trace.messages[idx].timestamp);
  }
  return f;
}

std::vector<std::pair<ReplicaId, std::size_t>> applied_sequence(const Trace& trace) {
  std::vector<std::pair<ReplicaId, std::size_t>> out;
  for (const auto& s : trace.steps) {
    std::size_t idx = s.emitted ? *s.emitted : s.event.at("msg").get<std::size_t>();
    out.emplace_back(s.replica, idx);
  }
  return out;
}

// ------------------------------------------------------------- generation

Scenario random_execution(const CrdtInstance& inst, const RandomConfig& cfg) {
  if (!inst.gen_op) throw Error("instance '" + inst.name + "' has no operation generator");
  for (const auto& [name, w] : cfg.weights) {
    if (!inst.has_op(name))
      throw UnknownOperation("weight names unknown operation '" + name + "'");
    if (w < 0) throw ScenarioError("negative weight for '" + name + "'");
  }
  Scenario sc;
  sc.instance = inst.name;
  sc.replicas = cfg.replicas;
  sc.seed = cfg.seed;
  // The generator stream is distinct from the run's drain stream so the
  // terminal drain of the produced scenario is not correlated with the
  // choices made here.
  Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);

  Runtime rt(inst, sc);

  auto draw_op = [&](Replica& rep) {
    Operation op = inst.gen_op(rng, rep.state, rep.id);
    if (cfg.weights.empty()) return op;
    double total = 0;
    for (const auto& [name, w] : cfg.weights) total += w;
    if (total <= 0) return op;
    double roll = static_cast<double>(rng.below(1u << 20)) / (1u << 20) * total;
    std::string want;
    for (const auto& [name, w] : cfg.weights) {
      if (roll < w || name == cfg.weights.rbegin()->first) {
        want = name;
        break;
      }
      roll -= w;
    }
    for (int tries = 0; tries < 100 && op.name != want; ++tries) {
      op = inst.gen_op(rng, rep.state, rep.id);
    }
    return op;
  };

  std::size_t issued = 0;
  while (issued < cfg.ops) {
    // Roughly 2:1 ops to explicit deliveries keeps concurrency high while
    // still exercising mid-run exchange.
    bool deliver = rt.pending() && rng.below(3) == 0;
    if (deliver) {
      std::vector<std::pair<ReplicaId, std::size_t>> candidates;
      for (const auto& id : rt.order) {
        const Replica& rep = rt.reps.at(id);
        for (std::size_t i = 0; i < rt.msgs.size(); ++i) {
          if (rt.seen[i].count(id)) continue;
          if (causal_deliverable(rt.msgs[i].timestamp, rt.msgs[i].author, rep.clock))
            candidates.emplace_back(id, i);
        }
      }
      if (!candidates.empty()) {
        auto [to, idx] = candidates[rng.below(candidates.size())];
        rt.at(to).step(Receive{rt.msgs[idx]});
        rt.seen[idx].insert(to);
        sc.events.push_back(DeliverEvent{to, idx});
        continue;
      }
    }
    ReplicaId id = rt.order[rng.below(rt.order.size())];
    Replica& rep = rt.at(id);
    Operation op = draw_op(rep);
    auto msg = rep.step(LocalOp{op});
    rt.msgs.push_back(*msg);
    rt.seen.push_back({id});
    sc.events.push_back(OpEvent{id, std::move(op)});
    ++issued;
  }
  sc.events.push_back(DeliverAllEvent{});
  return sc;
}

// ------------------------------------------------------------ enumeration

OpSchedule schedule_from_scenario(const Scenario& sc) {
  OpSchedule sched;
  sched.instance = sc.instance;
  sched.replicas = sc.replicas;
  for (const auto& ev : sc.events) {
    if (const auto* op = std::get_if<OpEvent>(&ev)) sched.ops.emplace_back(op->replica, op->op);
  }
  return sched;
}

std::set<std::string> enumerate_deliveries(const CrdtInstance& inst, const OpSchedule& sched,
                                           std::size_t max_messages) {
  if (sched.ops.size() > max_messages) {
    throw BoundExceeded("schedule has " + std::to_string(sched.ops.size()) +
                        " messages, enumeration bound is " + std::to_string(max_messages));
  }
  std::map<ReplicaId, Replica> reps;
  for (const auto& r : sched.replicas) reps.emplace(r, Replica(r, inst));
  std::vector<TaggedMessage> msgs;
  for (const auto& [r, op] : sched.ops) {
    auto it = reps.find(r);
    if (it == reps.end()) throw ScenarioError("unknown replica '" + r + "' in schedule");
    msgs.push_back(*it->second.step(LocalOp{op}));
  }

  std::set<std::string> outcomes;
  for (auto& [id, rep] : reps) {
    std::vector<std::size_t> incoming;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
      if (msgs[i].author != id) incoming.push_back(i);
    }
    // DFS over delivery subsets; distinct orders reaching the same
    // (delivered-set, state) pair collapse.
    std::set<std::pair<std::uint64_t, std::string>> visited;
    struct Node {
      std::uint64_t mask;
      Value state;
      VectorClock clock;
    };
    std::vector<Node> stack{{0, rep.state, rep.clock}};
    while (!stack.empty()) {
      Node n = std::move(stack.back());
      stack.pop_back();
      if (!visited.emplace(n.mask, canonical(n.state)).second) continue;
      if (n.mask == (incoming.empty() ? 0 : (1ULL << incoming.size()) - 1)) {
        outcomes.insert(canonical(inst.eval(Value(), n.state)));
        continue;
      }
      for (std::size_t k = 0; k < incoming.size(); ++k) {
        if (n.mask & (1ULL << k)) continue;
        const TaggedMessage& m = msgs[incoming[k]];
        if (!causal_deliverable(m.timestamp, m.author, n.clock)) continue;
        auto next = inst.effect(m, n.state);
        if (!next) throw UndefinedEffect("effect undefined during enumeration");
        stack.push_back({n.mask | (1ULL << k), std::move(*next), vc_merge(n.clock, m.timestamp)});
      }
    }
  }
  return outcomes;
}

// ----------------------------------------------------------- polog oracles

namespace {

bool strictly_before(const TaggedMessage& a, const TaggedMessage& b) {
  return vc_compare(a.timestamp, b.timestamp) == CausalRelation::Before;
}

struct SplitLog {
  std::vector<TaggedMessage> first;
  std::vector<TaggedMessage> second;
};

SplitLog split_by_component(const std::vector<TaggedMessage>& history) {
  SplitLog out;
  for (const auto& m : history) {
    if (payload_component(m.payload) == 1)
      out.first.push_back(m);
    else
      out.second.push_back(m);
  }
  return out;
}

}  // namespace

Value polog_awset_oracle(const std::vector<TaggedMessage>& history) {
  SplitLog log = split_by_component(history);  // first: removes, second: adds
  std::vector<Value> visible;
  std::set<std::string> done;
  for (const auto& add : log.second) {
    Value elem = payload_body(add.payload).at("a");
    if (done.count(canonical(elem))) continue;
    bool survives = false;
    for (const auto& cand : log.second) {
      if (payload_body(cand.payload).at("a") != elem) continue;
      bool killed = false;
      for (const auto& rem : log.first) {
        if (payload_body(rem.payload).at("a") != elem) continue;
        if (strictly_before(cand, rem)) {
          killed = true;
          break;
        }
      }
      if (!killed) {
        survives = true;
        break;
      }
    }
    done.insert(canonical(elem));
    if (survives) visible.push_back(elem);
  }
  std::sort(visible.begin(), visible.end(), [](const Value& a, const Value& b) { return a < b; });
  return Value(visible);
}

Value polog_rwset_oracle(const std::vector<TaggedMessage>& history) {
  SplitLog log = split_by_component(history);  // first: adds, second: removes
  std::vector<Value> visible;
  std::set<std::string> done;
  for (const auto& add : log.first) {
    Value elem = payload_body(add.payload).at("a");
    if (done.count(canonical(elem))) continue;
    done.insert(canonical(elem));
    bool present = true;
    for (const auto& rem : log.second) {
      if (payload_body(rem.payload).at("a") != elem) continue;
      bool overridden = false;
      for (const auto& cand : log.first) {
        if (payload_body(cand.payload).at("a") != elem) continue;
        if (strictly_before(rem, cand)) {
          overridden = true;
          break;
        }
      }
      if (!overridden) {
        present = false;
        break;
      }
    }
    if (present) visible.push_back(elem);
  }
  std::sort(visible.begin(), visible.end(), [](const Value& a, const Value& b) { return a < b; });
  return Value(visible);
}

Value polog_ewflag_oracle(const std::vector<TaggedMessage>& history) {
  SplitLog log = split_by_component(history);  // first: disables, second: enables
  for (const auto& en : log.second) {
    bool killed = false;
    for (const auto& dis : log.first) {
      if (strictly_before(en, dis)) {
        killed = true;
        break;
      }
    }
    if (!killed) return Value("enabled");
  }
  return Value("disabled");
}

Value polog_dwflag_oracle(const std::vector<TaggedMessage>& history) {
  SplitLog log = split_by_component(history);  // first: enables, second: disables
  if (log.first.empty()) return Value("disabled");
  for (const auto& dis : log.second) {
    bool overridden = false;
    for (const auto& en : log.first) {
      if (strictly_before(dis, en)) {
        overridden = true;
        break;
      }
    }
    if (!overridden) return Value("disabled");
  }
  return Value("enabled");
}

}  // namespace sdp
