// quasistar: run scenario configs and the built-in replication catalog.

#include "quasistar/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace sc = quasistar::scenarios;

namespace {

constexpr int kOk = 0;
constexpr int kScenarioFailure = 1;
constexpr int kParseError = 2;

int report(const sc::RunReport& r) {
  for (const auto& [name, o] : r.outcomes) {
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << '\n';
    for (const auto& f : o.failures) std::cout << "     " << f << '\n';
  }
  return r.all_passed() ? kOk : kScenarioFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi *-algebra experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";
  app.add_option("--jobs,-j", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized probes");
  app.add_option("--out-dir,-o", out_dir, "output directory");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));

  auto* run = app.add_subcommand("run", "run the scenarios of a config file");
  std::string config_path;
  run->add_option("config", config_path, "scenario config (JSON)")->required();

  auto* list = app.add_subcommand("list", "list the built-in scenarios");
  std::string module;
  std::string list_format = "text";
  list->add_option("--module,-m", module, "filter by module");
  list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* replicate = app.add_subcommand("replicate", "run built-in scenarios");
  std::vector<std::string> ids;
  replicate->add_option("id", ids, "scenario id, or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*list) {
      const auto cat = sc::catalog_json(module.empty() ? std::nullopt : std::optional<std::string>(module));
      if (list_format == "json") {
        std::cout << cat.dump(2) << '\n';
      } else {
        for (const auto& b : cat) {
          std::cout << b["id"].get<std::string>() << "  [" << b["module"].get<std::string>() << "] "
                    << b["operation"].get<std::string>() << "  " << b["title"].get<std::string>() << "\n    "
                    << b["parameters"].dump() << '\n';
        }
      }
      return kOk;
    }

    const auto fmt = sc::parse_format(format);
    std::vector<sc::Scenario> scenarios;
    std::uint64_t effective_seed = seed;
    if (*run) {
      const auto config = sc::load_config(config_path);
      if (!seed_opt->count() && config.seed) effective_seed = *config.seed;
      scenarios = config.scenarios;
    } else {
      for (const auto& id : ids) {
        if (id == "all") {
          for (const auto& b : sc::catalog()) scenarios.push_back(b.scenario);
          continue;
        }
        const auto* b = sc::find_builtin(id);
        if (!b) throw sc::ConfigError("id", "unknown scenario '" + id + "'");
        scenarios.push_back(b->scenario);
      }
    }
    return report(sc::run_all(scenarios, effective_seed, out_dir, fmt, jobs));
  } catch (const sc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kScenarioFailure;
  }
}
