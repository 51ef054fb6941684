#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kform/linalg.hpp"
#include "kform/space_form.hpp"

namespace kform::verify {

using Json = nlohmann::ordered_json;

enum class Mode { Pullback, Rigidity, Levi, Umehara, Relatives, Suite };

std::string mode_name(Mode mode);

struct Sampling {
  std::size_t count = 50;
  std::uint64_t seed = 42;
  double radius = 0.0;  // 0 selects the source's default radius
};

struct Tolerances {
  double pass = 1e-9;
  double zero = 1e-9;
};

/// Extra degree checked alongside the main one in pullback mode.
struct Companion {
  int p = 1;
  std::optional<bool> expect;
};

struct UmeharaSpec {
  std::string series = "ball_slice";
  int p = 1;
  std::vector<int> orders{2, 4, 6, 8};
  std::vector<std::string> map;  // psi only; arity taken from `arity`
  int arity = 1;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::Pullback;
  std::optional<SpaceForm> source;
  std::optional<SpaceForm> target;
  std::optional<SpaceForm> target2;
  std::vector<std::string> map;
  std::vector<std::string> map2;
  int p = 1;
  Sampling sampling;
  Tolerances tolerances;
  std::vector<Companion> companions;
  std::optional<bool> expect;                 // expected verdict of the main check
  std::optional<double> expected_factor;      // rigidity mode
  std::optional<Signature> expect_signature;  // levi mode
  double levi_r = 1.0;
  UmeharaSpec umehara;
};

/// Validates a scenario document. Errors are ScenarioError naming the field.
Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::string& path);
Json scenario_to_json(const Scenario& s);

struct CheckRecord {
  std::string name;
  bool observed = false;
  std::optional<bool> expected;
  std::optional<double> lambdaHat;
  std::optional<double> residual;
  std::optional<Signature> signature;
  std::optional<std::vector<std::pair<int, std::size_t>>> rankTable;
  Json details = Json::object();

  /// observed when nothing is expected, otherwise observed == expected.
  bool verdict() const { return expected ? observed == *expected : observed; }
};

struct Report {
  Json scenario;
  std::vector<CheckRecord> checks;  // sorted by name
  std::vector<std::pair<std::string, double>> timings;

  bool overall() const;
};

Report run_scenario(const Scenario& scenario);

/// The fixed battery of reference checks (metric normalizations, Ricci
/// identities, pullback examples, Levi signatures, obstruction probes,
/// Umehara ranks, indefinite metrics, relatives).
Report run_reference_suite(std::uint64_t seed = 42);

/// Report as JSON. Timings are left out unless requested, so reports with
/// equal inputs are byte-identical.
Json report_to_json(const Report& report, bool include_timings = false);

}  // namespace kform::verify
