#include "quasistar/algebra.hpp"
#include "quasistar/gns.hpp"
#include "quasistar/scenarios.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quasistar;
using namespace quasistar::scenarios;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = QUASISTAR_TEST_DATA;

std::string location_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.location();
  }
  return "";
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + QUASISTAR_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("quasistar_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config validation reports the offending location") {
  const json ok = json::parse(slurp(kData / "m2_trace.json"));
  const auto c = parse_config(ok);
  REQUIRE(c.scenarios.size() == 1);
  CHECK(c.seed == 7u);
  CHECK(c.scenarios[0].parameters["state"] == "trace");

  CHECK(location_of(json::parse(slurp(kData / "unknown_operation.json"))) == "scenarios[0].operation");
  CHECK(location_of(json::parse(slurp(kData / "bad_type.json"))) == "scenarios[0].parameters.n");
  CHECK(location_of(json::parse(R"({"scenarios": [], "extra": 1})")) == "extra");
  CHECK(location_of(json::parse(R"({"seed": 1})")) == "scenarios");
  CHECK(location_of(json::parse(
            R"({"scenarios": [{"name": "a", "module": "nope", "operation": "x", "output_path": "a"}]})")) ==
        "scenarios[0].module");
  CHECK(location_of(json::parse(
            R"({"scenarios": [{"name": "a", "module": "gns", "operation": "gns_construct", "output_path": "../a"}]})")) ==
        "scenarios[0].output_path");
  CHECK(location_of(json::parse(
            R"({"scenarios": [{"name": "a", "module": "gns", "operation": "gns_construct", "parameters": {"k": 1},
                "output_path": "a"}]})")) == "scenarios[0].parameters.k");
  CHECK(parse_config(json::parse(slurp(kData / "empty.json"))).scenarios.empty());
}

TEST_CASE("malformed JSON files fail with a byte offset") {
  const auto dir = scratch("malformed");
  std::ofstream(dir / "bad.json") << "{\"scenarios\": [";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("catalog") {
  CHECK(catalog().size() == 7);
  CHECK(catalog_json().size() == 7);
  CHECK(catalog_json(std::string("ccr-lab")).size() == 1);
  for (const auto& b : catalog()) CHECK(find_operation(b.scenario.module, b.scenario.operation) != nullptr);
  CHECK(find_builtin("nope") == nullptr);
  CHECK(modules().size() == 6);
}

TEST_CASE("csv tables convert to row objects") {
  const auto j = csv_to_json("n,norm,tag\n1,0.5,a\n2,,b\n");
  REQUIRE(j.size() == 2);
  CHECK(j[0]["n"] == 1.0);
  CHECK(j[0]["tag"] == "a");
  CHECK(j[1]["norm"].is_null());
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("runner failures become failed outcomes") {
  Scenario s{"bad", "gns", "gns_construct", {{"algebra", "complex"}, {"n", 2}, {"state", "pure"}}, "bad"};
  const auto o = run_scenario(s, 0);
  CHECK_FALSE(o.passed);
  CHECK_FALSE(o.failures.empty());
}

TEST_CASE("CLI run writes the golden GNS representation") {
  const auto dir = scratch("cli_run");
  REQUIRE(cli("run \"" + (kData / "m2_trace.json").string() + "\" --out-dir \"" + (dir / "out").string() + "\"",
              dir / "log.txt") == 0);
  const auto summary = json::parse(slurp(dir / "out" / "m2_trace" / "summary.json"));
  const auto a = algebra::matrix_algebra(2);
  const auto rep = gns::gns_construct(a, algebra::normalized_trace(a, 2));
  CHECK(summary["passed"] == true);
  CHECK(summary["seed"] == 7);
  CHECK(summary["result"]["gns_rep"] == gns::to_json(rep));
  CHECK(summary["result"]["gns_rep"]["rank"] == 4);
}

TEST_CASE("CLI exit codes") {
  const auto dir = scratch("cli_codes");
  const auto out = (dir / "out").string();
  CHECK(cli("run \"" + (kData / "empty.json").string() + "\" -o \"" + out + "\"", dir / "empty.txt") == 0);
  CHECK((!fs::exists(out) || fs::is_empty(out)));
  CHECK(cli("run \"" + (kData / "unknown_operation.json").string() + "\" -o \"" + out + "\"", dir / "unk.txt") == 2);
  CHECK(slurp(dir / "unk.txt").find("scenarios[0].operation") != std::string::npos);
  CHECK(cli("replicate nope -o \"" + out + "\"", dir / "id.txt") == 2);
  CHECK(cli("frobnicate", dir / "sub.txt") == 2);
  REQUIRE(cli("list --format json", dir / "list.json") == 0);
  CHECK(json::parse(slurp(dir / "list.json")).size() == 7);
  REQUIRE(cli("list -m ccr-lab", dir / "list.txt") == 0);
  CHECK(slurp(dir / "list.txt").find("ccr_suite") != std::string::npos);
}
