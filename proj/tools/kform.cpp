#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kform/error.hpp"
#include "kform/verify.hpp"

namespace {

using namespace kform::verify;

int emit(const Report& report, const std::string& json_path, bool timings) {
  const std::string text = report_to_json(report, timings).dump(2) + "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "kform: cannot write " << json_path << "\n";
      return 2;
    }
    out << text;
  }
  for (const auto& c : report.checks) std::cout << (c.verdict() ? "PASS " : "FAIL ") << c.name << "\n";
  std::cout << "overall: " << (report.overall() ? "PASS" : "FAIL") << "\n";
  return report.overall() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kaehler space-form verification engine"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string json_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  bool timings = false;

  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--json", json_path, "Write the report to this file");
  run->add_option("--seed", seed, "Override the sampling seed");
  run->add_option("--samples", samples, "Override the sample count")->check(CLI::PositiveNumber);
  run->add_flag("--timings", timings, "Include timings in the JSON report");

  auto* suite = app.add_subcommand("suite", "Run the reference suite");
  suite->add_option("--json", json_path, "Write the report to this file");
  suite->add_option("--seed", seed, "Sampling seed (default 42)");
  suite->add_flag("--timings", timings, "Include timings in the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*suite) return emit(run_reference_suite(seed.value_or(42)), json_path, timings);
    Scenario s = load_scenario(scenario_path);
    if (seed) s.sampling.seed = *seed;
    if (samples) s.sampling.count = *samples;
    return emit(run_scenario(s), json_path, timings);
  } catch (const kform::ScenarioError& e) {
    std::cerr << "kform: invalid scenario: " << e.what() << "\n";
    return 2;
  } catch (const kform::Error& e) {
    std::cerr << "kform: " << e.what() << "\n";
    return 2;
  }
}
