#include <CLI11.hpp>
#include <sdp/suites.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace sdp {
namespace {

Registry& cli_registry() {
  Registry& reg = default_registry();
  register_negative_controls(reg);
  return reg;
}

Value read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  try {
    return Value::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("parse error in '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write '" + path + "'");
  out << text << "\n";
}

std::vector<ReplicaId> replica_ids(std::size_t count) {
  if (count < 1 || count > 26) throw ScenarioError("replica count must be in 1..26");
  std::vector<ReplicaId> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::string(1, char('A' + i)));
  return out;
}

std::uint64_t env_seed_override(std::uint64_t seed) {
  const char* env = std::getenv("SEMIDIRECT_SEED");
  if (!env || !*env) return seed;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw ScenarioError("SEMIDIRECT_SEED must be a non-negative integer, got '" +
                        std::string(env) + "'");
  }
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path) {
  Scenario sc = Scenario::from_json(read_json_file(scenario_path));
  Trace tr = run_scenario(cli_registry(), sc);
  std::string doc = canonical(tr.to_json());
  if (out_path.empty()) {
    std::cout << doc << "\n";
  } else {
    write_text(out_path, doc);
  }
  if (!check_convergence(tr)) {
    std::cerr << "replicas diverged: " << canonical(tr.to_json().at("final").at("evals"))
              << "\n";
    return 2;
  }
  return 0;
}

Scenario remove_event(const Scenario& sc, std::size_t k) {
  Scenario out = sc;
  out.events.clear();
  // Dropping an op removes its message: deliveries of it go too, and
  // references to later messages shift down by one.
  std::ptrdiff_t removed_msg = -1;
  if (std::holds_alternative<OpEvent>(sc.events[k])) {
    removed_msg = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::holds_alternative<OpEvent>(sc.events[i])) ++removed_msg;
    }
  }
  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    if (i == k) continue;
    ScenarioEvent ev = sc.events[i];
    if (auto* d = std::get_if<DeliverEvent>(&ev); d && removed_msg >= 0) {
      if (static_cast<std::ptrdiff_t>(d->msg) == removed_msg) continue;
      if (static_cast<std::ptrdiff_t>(d->msg) > removed_msg) --d->msg;
    }
    out.events.push_back(std::move(ev));
  }
  return out;
}

bool scenario_diverges(const CrdtInstance& inst, const Scenario& sc) {
  try {
    return !check_convergence(run_scenario(inst, sc));
  } catch (const Error&) {
    return false;  // an invalid scenario is not the failure being chased
  }
}

Scenario shrink_scenario(const CrdtInstance& inst, Scenario sc) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
      if (i + 1 == sc.events.size() && std::holds_alternative<DeliverAllEvent>(sc.events[i]))
        continue;  // keep the terminal drain so convergence stays checkable
      Scenario cand = remove_event(sc, i);
      if (scenario_diverges(inst, cand)) {
        sc = std::move(cand);
        progress = true;
        break;
      }
    }
  }
  return sc;
}

int cmd_fuzz(const std::string& name, std::size_t runs, std::uint64_t seed, std::size_t ops,
             std::size_t replicas, const std::string& out_path) {
  const CrdtInstance& inst = cli_registry().get(name);
  RandomConfig cfg;
  cfg.replicas = replica_ids(replicas);
  cfg.ops = ops;
  for (std::size_t i = 0; i < runs; ++i) {
    cfg.seed = seed + i;
    Scenario sc = random_execution(inst, cfg);
    Trace tr = run_scenario(inst, sc);
    bool converged = check_convergence(tr);
    Value line = Value::object();
    line["run"] = i;
    line["seed"] = cfg.seed;
    line["converged"] = converged;
    std::cout << canonical(line) << "\n";
    if (!converged) {
      Scenario minimal = shrink_scenario(inst, sc);
      write_text(out_path, canonical(minimal.to_json()));
      std::cerr << "divergence on seed " << cfg.seed << "; minimal scenario ("
                << minimal.events.size() << " events) written to " << out_path << "\n";
      return 2;
    }
  }
  return 0;
}

int cmd_check(const std::string& name, const std::string& suite, std::uint64_t seed) {
  const CrdtInstance& inst = cli_registry().get(name);
  auto results = run_check(inst, suite, seed);
  bool ok = true;
  for (const auto& r : results) {
    Value line = Value::object();
    line["suite"] = r.suite;
    line["instance"] = r.instance;
    line["cases"] = r.cases;
    line["failures"] = r.failures;
    std::cout << canonical(line) << "\n";
    for (const auto& note : r.notes) std::cerr << r.suite << ": " << note << "\n";
    ok = ok && r.passed();
  }
  return ok ? 0 : 2;
}

int cmd_replay(const std::string& trace_path, const std::string& scenario_path) {
  Value stored = read_json_file(trace_path);
  Scenario sc = Scenario::from_json(read_json_file(scenario_path));
  Trace fresh = run_scenario(cli_registry(), sc);
  Value fresh_doc = fresh.to_json();
  if (canonical(stored) == canonical(fresh_doc)) return 0;
  std::size_t step = 0;
  if (stored.is_object() && stored.contains("steps") && stored.at("steps").is_array()) {
    const Value& a = stored.at("steps");
    const Value& b = fresh_doc.at("steps");
    while (step < a.size() && step < b.size() &&
           canonical(a.at(step)) == canonical(b.at(step)))
      ++step;
  }
  std::cerr << "trace mismatch; first divergence at step " << step << "\n";
  return 3;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"operation-based CRDT simulator and property checker"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, trace_path;
  std::string fuzz_out = "fuzz-failure.json";
  std::string instance, suite = "all";
  std::size_t runs = 100, ops = 10, replicas = 3;
  std::uint64_t seed = 1;

  auto* simulate = app.add_subcommand("simulate", "run a scenario file and emit its trace");
  simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--out", out_path, "trace output path (default: standard output)");

  auto* fuzz = app.add_subcommand("fuzz", "random executions with convergence checking");
  fuzz->add_option("--instance", instance, "registered instance name")->required();
  fuzz->add_option("--runs", runs, "number of seeded runs");
  fuzz->add_option("--seed", seed, "base seed");
  fuzz->add_option("--ops", ops, "operations per run");
  fuzz->add_option("--replicas", replicas, "replica count (ids A, B, ...)");
  fuzz->add_option("--out", fuzz_out, "path for a shrunk failing scenario");

  auto* check = app.add_subcommand("check", "assumption, transformation, and oracle suites");
  check->add_option("--instance", instance, "registered instance name")->required();
  check->add_option("--suite", suite,
                    "assumptions | tp | oracle | compressed | prune | all");
  check->add_option("--seed", seed, "sweep seed");

  auto* replay = app.add_subcommand("replay", "re-run a scenario and compare its trace");
  replay->add_option("--trace", trace_path, "stored trace JSON file")->required();
  replay->add_option("--scenario", scenario_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(scenario_path, out_path);
    if (fuzz->parsed())
      return cmd_fuzz(instance, runs, env_seed_override(seed), ops, replicas, fuzz_out);
    if (check->parsed()) return cmd_check(instance, suite, env_seed_override(seed));
    if (replay->parsed()) return cmd_replay(trace_path, scenario_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace
}  // namespace sdp

int main(int argc, char** argv) { return sdp::run_cli(argc, argv); }
