#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sdp/value.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

const std::string kCli = SDP_CLI_PATH;
const std::string kScenarios = SDP_SCENARIO_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) {
  return "/tmp/sdp_cli_test_" + std::to_string(::getpid()) + "_" + name;
}

RunResult run(const std::string& args, const std::string& env = "") {
  RunResult r;
  std::string out = tmp_path("stdout"), err = tmp_path("stderr");
  std::string cmd = env + (env.empty() ? "" : " ") + kCli + " " + args + " >" + out +
                    " 2>" + err;
  int status = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

}  // namespace

TEST_CASE("simulate reproduces the bundled scenarios") {
  struct Expect {
    const char* file;
    const char* final_a;
  };
  const Expect cases[] = {
      {"addmult_concurrent.json", "17"},
      {"flag_concurrent_disable.json", "\"disabled\""},
      {"minplus_anomaly.json", "1"},
  };
  for (const auto& c : cases) {
    RunResult r = run("simulate --scenario " + kScenarios + "/" + c.file);
    INFO(c.file, " stderr: ", r.err);
    CHECK(r.exit_code == 0);
    sdp::Value trace = sdp::Value::parse(r.out);
    CHECK(sdp::canonical(trace.at("final").at("evals").at("A")) == c.final_a);
    CHECK(trace.at("final").at("evals").at("A") == trace.at("final").at("evals").at("B"));
  }
}

TEST_CASE("simulate reports the channel map exchange") {
  RunResult r = run("simulate --scenario " + kScenarios + "/channel_map.json");
  REQUIRE(r.exit_code == 0);
  sdp::Value evals = sdp::Value::parse(r.out).at("final").at("evals");
  sdp::Value want = sdp::Value::object();
  want["general"] = sdp::Value::array({"alice", "bob", "dave"});
  want["memes"] = sdp::Value::array({"alice", "dave"});
  want["random"] = sdp::Value::array({"alice", "charlie", "dave"});
  CHECK(evals.at("A") == want);
  CHECK(evals.at("B") == want);
}

TEST_CASE("simulate writes the trace to a file on request") {
  std::string out = tmp_path("trace.json");
  RunResult r = run("simulate --scenario " + kScenarios + "/addmult_concurrent.json --out " +
                    out);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(sdp::Value::parse(slurp(out)).contains("steps"));
  std::remove(out.c_str());
}

TEST_CASE("simulate rejects malformed input with exit 1") {
  std::string bad = tmp_path("bad.json");
  write_file(bad, "{ this is not json");
  RunResult r = run("simulate --scenario " + bad);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("error") != std::string::npos);
  std::remove(bad.c_str());

  std::string unknown = tmp_path("unknown.json");
  write_file(unknown,
             R"({"instance":"no-such","replicas":["A"],"seed":1,"events":[]})");
  CHECK(run("simulate --scenario " + unknown).exit_code == 1);
  std::remove(unknown.c_str());

  CHECK(run("simulate --scenario /nonexistent/path.json").exit_code == 1);
}

TEST_CASE("fuzz passes on a stock instance and finds the broken one") {
  RunResult ok = run("fuzz --instance addmult --runs 15 --seed 5");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("\"converged\":true") != std::string::npos);

  CHECK(run("fuzz --instance addmult --runs 0").exit_code == 0);

  std::string shrunk = tmp_path("shrunk.json");
  RunResult bad = run("fuzz --instance broken-addmult --runs 50 --seed 5 --out " + shrunk);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("divergence") != std::string::npos);

  // the shrunk scenario is itself a valid diverging run
  sdp::Value doc = sdp::Value::parse(slurp(shrunk));
  CHECK(doc.at("instance") == sdp::Value("broken-addmult"));
  CHECK(doc.at("events").size() <= 4);
  RunResult replayed = run("simulate --scenario " + shrunk);
  CHECK(replayed.exit_code == 2);
  std::remove(shrunk.c_str());
}

TEST_CASE("environment seed overrides the flag") {
  RunResult r = run("fuzz --instance addmult --runs 1 --seed 5", "SEMIDIRECT_SEED=99");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"seed\":99") != std::string::npos);

  RunResult c = run("check --instance addmult --suite assumptions --seed 5",
                    "SEMIDIRECT_SEED=garbage");
  CHECK(c.exit_code == 1);
}

TEST_CASE("check prints per suite counts and honors applicability") {
  RunResult r = run("check --instance addmult --suite assumptions --seed 7");
  CHECK(r.exit_code == 0);
  sdp::Value line = sdp::Value::parse(r.out);
  CHECK(line.at("suite") == sdp::Value("assumptions"));
  CHECK(line.at("failures") == sdp::Value(0));
  CHECK(line.at("cases").get<long long>() >= 1500);

  CHECK(run("check --instance map-homap --suite compressed").exit_code == 1);
  CHECK(run("check --instance counter --suite tp").exit_code == 1);
  CHECK(run("check --instance addmult --suite no-such-suite").exit_code == 1);
  CHECK(run("check --instance no-such --suite all").exit_code == 1);
  CHECK(run("check --instance broken-addmult --suite assumptions").exit_code == 2);
}

TEST_CASE("replay detects byte level trace drift") {
  std::string trace = tmp_path("replay_trace.json");
  std::string scenario = kScenarios + "/addmult_concurrent.json";
  REQUIRE(run("simulate --scenario " + scenario + " --out " + trace).exit_code == 0);
  CHECK(run("replay --trace " + trace + " --scenario " + scenario).exit_code == 0);

  sdp::Value doc = sdp::Value::parse(slurp(trace));
  doc["steps"][5]["evals"]["A"] = 1234;
  write_file(trace, sdp::canonical(doc));
  RunResult r = run("replay --trace " + trace + " --scenario " + scenario);
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("step 5") != std::string::npos);
  std::remove(trace.c_str());
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("simulate").exit_code != 0);       // missing --scenario
  CHECK(run("no-such-subcommand").exit_code != 0);
  CHECK(run("").exit_code != 0);               // subcommand required
  CHECK(run("--help").exit_code == 0);
}
