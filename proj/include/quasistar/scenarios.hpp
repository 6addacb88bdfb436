/**
 * @file scenarios.hpp
 * @brief Scenario configs, the operation registry and the built-in replication
 *        catalog behind the command-line runner.
 *
 * Config format (JSON):
 *   { "seed": 0,
 *     "scenarios": [ { "name": "m2_trace", "module": "gns",
 *                      "operation": "gns_construct",
 *                      "parameters": { "n": 2, "state": "trace" },
 *                      "output_path": "m2_trace" } ] }
 *
 * Parameters are checked against the defaults of the operation: unknown keys
 * and type mismatches are rejected with the JSON location of the offending
 * value.
 */

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quasistar::scenarios {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string location, const std::string& message)
      : std::runtime_error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

struct Scenario {
  std::string name;
  std::string module;
  std::string operation;
  nlohmann::json parameters = nlohmann::json::object();  ///< merged with the operation defaults
  std::string output_path;
};

struct Table {
  std::string name;
  std::string csv;  ///< header row plus data rows
};

struct Outcome {
  bool passed = false;
  nlohmann::json result;
  std::vector<Table> tables;
  std::vector<std::string> failures;
};

using Runner = std::function<Outcome(const nlohmann::json& parameters, std::uint64_t seed)>;

struct Operation {
  std::string module;
  std::string name;
  std::string summary;
  nlohmann::json defaults;
  Runner run;
};

const std::vector<Operation>& registry();
const Operation* find_operation(const std::string& module, const std::string& name);

/// Modules in registry order: gns, forms, function-lab, matrix-lab, op-topologies, ccr-lab.
std::vector<std::string> modules();

struct Config {
  std::optional<std::uint64_t> seed;
  std::vector<Scenario> scenarios;
};

/// Throws ConfigError on any structural or schema violation.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::filesystem::path& path);

struct Builtin {
  std::string id;
  std::string title;
  Scenario scenario;
};

const std::vector<Builtin>& catalog();
const Builtin* find_builtin(const std::string& id);
nlohmann::json catalog_json(const std::optional<std::string>& module = std::nullopt);

/// Runs one scenario; exceptions inside the runner become a failed outcome.
Outcome run_scenario(const Scenario& s, std::uint64_t seed);

enum class Format { csv, json };
Format parse_format(const std::string& tag);

/// Writes summary.json plus one file per table under out_dir/output_path.
/// Each file is written to a temporary name and renamed into place.
void write_outcome(const Scenario& s, const Outcome& o, std::uint64_t seed, const std::filesystem::path& out_dir,
                   Format format);

struct RunReport {
  std::vector<std::pair<std::string, Outcome>> outcomes;  ///< in scenario order
  bool all_passed() const {
    for (const auto& [name, o] : outcomes)
      if (!o.passed) return false;
    return true;
  }
};

/// Runs the scenarios on up to `jobs` threads and writes their outputs.
RunReport run_all(const std::vector<Scenario>& scenarios, std::uint64_t seed, const std::filesystem::path& out_dir,
                  Format format, unsigned jobs);

void write_atomic(const std::filesystem::path& path, const std::string& content);
/// CSV text to an array of row objects; numeric cells become numbers.
nlohmann::json csv_to_json(const std::string& csv);

}  // namespace quasistar::scenarios
