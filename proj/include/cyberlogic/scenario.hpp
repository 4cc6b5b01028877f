#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cyberlogic/protocol.hpp"

namespace cyberlogic {

struct QuerySpec {
  std::string name;
  std::vector<std::string> params;
};

// A visa as declared in a fixture: its demand reference is symbolic and is
// resolved to the demand entry's hash when the scenario replays.
struct VisaSpec {
  std::string id;
  std::string delivered_by;
  Time duration = 0;
  Formula kind;
  CountryName country;
  std::string demand_id;
};

struct Step {
  enum class Kind { Demand, Deliver, Control, Suspect, Tick, AssertFact };
  Kind kind = Kind::Tick;
  Time t = 0;
  std::string requester;
  std::string consulate;
  std::string officer;
  CountryName country;
  std::string demand_id;
  std::string visa_id;
  std::vector<QuerySpec> queries;
  std::string fact;  // formula text for AssertFact
};

struct Scenario {
  std::string name;
  ProtocolConfig config;
  CountryRegistry registry;
  std::vector<Authority> authorities;
  std::vector<std::string> initial_facts;  // attestation formulas
  std::vector<SchengenDemand> demands;
  std::vector<VisaSpec> visas;
  std::vector<Step> steps;
};

struct StepOutcome {
  std::size_t index = 0;
  std::string kind;
  bool ok = true;
  std::string detail;
  std::optional<Answer> answer;  // Suspect steps only
};

struct AccountabilityEntry {
  std::string requirement;  // row name, or "alert" for suspicious claims
  std::string claim;        // printed attestation
  std::string accountable;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<StepOutcome> steps;
  std::vector<Answer> alerts;  // one per Suspect step that raised
  std::vector<AccountabilityEntry> accountability;
};

struct StepFailure : std::runtime_error {
  StepFailure(std::size_t index, std::optional<ErrorCode> code, const std::string& what)
      : std::runtime_error("step " + std::to_string(index) + ": " + what),
        step_index(index),
        code(code) {}
  std::size_t step_index;
  std::optional<ErrorCode> code;
};

// Replays the steps over a fresh ledger and knowledge base. Deterministic:
// no clock, no randomness. Throws StepFailure when a step's protocol
// operation fails or is refused.
ScenarioReport run_scenario(const Scenario& s);

// The built-in reference workload: a three-month visa granted on an
// employment claim, later contradicted by a newspaper claim that the job had
// changed hands before the demand, so the control raises an alert.
Scenario build_jon_snow();

nlohmann::ordered_json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::ordered_json& j);
Scenario load_scenario_file(const std::string& path);  // throws BadFixture

nlohmann::ordered_json report_to_json(const ScenarioReport& r);
std::string report_to_table(const ScenarioReport& r);

nlohmann::ordered_json validation_report_to_json(const ValidationReport& r);
std::string validation_report_to_table(const ValidationReport& r);

// Printed form of a claim, e.g. "Cwinterfell |> KingOfTheNorth(JonSnow,60)".
std::string print_claim(const Attestation& a);

}  // namespace cyberlogic
