#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gerbe/cli.hpp"

using namespace gerbe::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string offending_key(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("schema lists every command") {
  const json s = schema();
  CHECK(s.at("commands").size() == 8);
  for (const auto& name : command_names()) CHECK(s.at("commands").contains(name));
  CHECK(s.at("commands").at("fock").at("params").at("N").at("default") == 6);
  CHECK(s.at("commands").at("all").at("params").empty());
}

TEST_CASE("defaults fill in") {
  const Scenario s = parse_scenario(R"({"command": "fock", "params": {"N": 5}})");
  CHECK(s.command == "fock");
  CHECK(s.seed == 0);
  CHECK(s.params.at("N") == 5);
  CHECK(s.params.at("colors") == 2);
  CHECK(s.params.at("lambda") == "1/2");
  CHECK(default_scenario("moduli").params.at("conjugations") == 10);
}

TEST_CASE("strict schema names the offending key") {
  CHECK(offending_key(R"({"command": "bogus"})") == "command");
  CHECK(offending_key(R"({"params": {}})") == "command");
  CHECK(offending_key(R"({"command": "fock", "extra": 1})") == "extra");
  CHECK(offending_key(R"({"command": "fock", "params": {"M": 3}})") == "params.M");
  CHECK(offending_key(R"({"command": "fock", "params": {"N": "six"}})") == "params.N");
  CHECK(offending_key(R"({"command": "fock", "params": {"N": 40}})") == "params.N");
  CHECK(offending_key(R"({"command": "fock", "params": {"lambda": "1"}})") == "params.lambda");
  CHECK(offending_key(R"({"command": "fock", "params": {"mu": "1/4"}})") == "params.mu");
  CHECK(offending_key(R"({"command": "fock", "seed": -1})") == "seed");
  CHECK(offending_key(R"({"command": "cover", "params": {"cuts": ["9/2"]}})") == "params.cuts[0]");
  CHECK(offending_key(R"({"command": "spectrum", "params": {"phases": [0.1, 0.2]}})") == "params.phases");
  CHECK(offending_key(R"({"command": "caloron", "params": {"preset": "nope"}})") == "params.preset");
  CHECK(offending_key(R"({"command": "caloron", "params": {"P": 15}})") == "params.P");
  CHECK(offending_key(R"({"command": "caloron", "params": {"reps": ["spin-3"], "preset": "su3-family", "n": 3}})") ==
        "params.reps[0]");
  CHECK(offending_key(R"({"command": "pairing", "params": {"gamma": [[5, 1]]}})") == "params.gamma[0]");
  CHECK(offending_key(R"({"command": "pairing", "params": {"windings": [1, 1]}})") == "params.windings");
  CHECK(offending_key(R"({"command": "all", "params": {"N": 4}})") == "params.N");
  CHECK(offending_key(R"({"command": "fock", "params": )") == "<document>");
  CHECK(offending_key(R"([1, 2])") == "<document>");
}

TEST_CASE("example scenarios validate") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(GERBE_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(parse_scenario(slurp(entry.path())));
    ++seen;
  }
  CHECK(seen >= 8);
}

TEST_CASE("reports are deterministic and canonical") {
  const Scenario s = parse_scenario(R"({"command": "cocycle", "params": {"phases": [[0.0]], "window": 3}})");
  const Report a = run(s), b = run(s);
  CHECK(a.passed());
  CHECK(a.serialize(false) == b.serialize(false));
  const json j = json::parse(a.serialize(false));
  CHECK(j.at("status") == "pass");
  CHECK(j.at("config_hash") == config_hash(s));
  CHECK(j.at("config_hash").get<std::string>().size() == 64);
  CHECK_FALSE(j.at("checks")[0].contains("runtime_ms"));
  CHECK(json::parse(a.serialize(true)).at("checks")[0].contains("runtime_ms"));
  // keys come out sorted
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(a.serialize(false).back() == '\n');
}

TEST_CASE("config hash ignores the output path and tracks the rest") {
  Scenario s = default_scenario("spectrum");
  const std::string h = config_hash(s);
  s.output_path = "/tmp/elsewhere.json";
  CHECK(config_hash(s) == h);
  s.seed = 1;
  CHECK(config_hash(s) != h);
  CHECK(config_hash(default_scenario("cover")) != h);
}

TEST_CASE("trivial cocycle phases are all one") {
  const Report r = run(parse_scenario(R"({"command": "cocycle", "params": {"phases": [[0.0]], "window": 3}})"));
  REQUIRE(r.checks.size() == 2);
  for (const auto& c : r.checks) {
    CHECK(c.status == "pass");
    CHECK(c.residual == 0.0);
  }
}

TEST_CASE("failing checks are reported as failures") {
  const Report r = run(parse_scenario(
      R"({"command": "caloron", "params": {"M": 8, "min_order": 6.0, "reps": ["adjoint"]}})"));
  CHECK_FALSE(r.passed());
  CHECK(r.checks.front().name == "caloron.ms_identity");
  CHECK(r.checks.front().status == "fail");
  CHECK(r.checks.front().comparison == ">=");
}

TEST_CASE("every command runs at its defaults") {
  for (const auto& name : command_names()) {
    if (name == "all" || name == "caloron") continue;
    CAPTURE(name);
    const Report r = run(default_scenario(name));
    CHECK(r.passed());
    CHECK_FALSE(r.checks.empty());
  }
}
