#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cyberlogic/formula_text.hpp"
#include "cyberlogic/ledger.hpp"
#include "cyberlogic/scenario.hpp"

namespace {

using cyberlogic::ErrorCode;
using json = nlohmann::ordered_json;

// Exit codes are a stable contract:
//   0 success / no alert      3 scenario raised an alert
//   1 bad input or file       4 demand validation failed
//   2 formula syntax error    5 broken ledger chain
enum ExitCode {
  kOk = 0,
  kBadInput = 1,
  kSyntax = 2,
  kAlert = 3,
  kValidationFailed = 4,
  kBrokenChain = 5,
};

struct ModeOverrides {
  std::optional<cyberlogic::PassportRule> passport;
  std::optional<cyberlogic::ItineraryRule> itinerary;
  std::optional<bool> record_controls;

  void apply(cyberlogic::ProtocolConfig& config) const {
    if (passport) config.passport_rule = *passport;
    if (itinerary) config.itinerary_rule = *itinerary;
    if (record_controls) config.record_controls = *record_controls;
  }
};

// CYBERLOGIC_MODE presets the mode flags, e.g.
//   CYBERLOGIC_MODE=passport_rule=paper,itinerary_rule=strict
// Command-line flags win over the environment.
ModeOverrides env_overrides() {
  ModeOverrides m;
  const char* env = std::getenv("CYBERLOGIC_MODE");
  if (!env) return m;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "passport_rule")
      m.passport = value == "paper" ? cyberlogic::PassportRule::Paper
                                    : cyberlogic::PassportRule::Prose;
    else if (key == "itinerary_rule")
      m.itinerary = value == "strict" ? cyberlogic::ItineraryRule::Strict
                                      : cyberlogic::ItineraryRule::Relaxed;
    else if (key == "record_controls")
      m.record_controls = value == "true" || value == "1";
  }
  return m;
}

json ast_to_json(const cyberlogic::Formula& f) {
  using Kind = cyberlogic::Formula::Kind;
  switch (f.kind()) {
    case Kind::Atom: {
      json args = json::array();
      for (const auto& a : f.args()) args.push_back(ast_to_json(a));
      return json{{"kind", "atom"}, {"head", f.head()}, {"args", args}};
    }
    case Kind::TimeLit:
      return json{{"kind", "time"}, {"value", f.time_value()}};
    case Kind::Not:
      return json{{"kind", "not"}, {"body", ast_to_json(f.child())}};
    case Kind::And:
      return json{{"kind", "and"}, {"lhs", ast_to_json(f.lhs())}, {"rhs", ast_to_json(f.rhs())}};
    case Kind::Implies:
      return json{
          {"kind", "implies"}, {"lhs", ast_to_json(f.lhs())}, {"rhs", ast_to_json(f.rhs())}};
    case Kind::Attest: {
      json when;
      switch (f.when().kind()) {
        case cyberlogic::TimeQualifier::Kind::Untimed: when = json{{"kind", "untimed"}}; break;
        case cyberlogic::TimeQualifier::Kind::At:
          when = json{{"kind", "at"}, {"t", f.when().time()}};
          break;
        case cyberlogic::TimeQualifier::Kind::Before:
          when = json{{"kind", "before"}, {"t", f.when().time()}};
          break;
        case cyberlogic::TimeQualifier::Kind::After:
          when = json{{"kind", "after"}, {"t", f.when().time()}};
          break;
      }
      return json{{"kind", "attest"},
                  {"claimer", f.claimer()},
                  {"access", f.access() == cyberlogic::Access::Direct ? "direct" : "indirect"},
                  {"when", when},
                  {"body", ast_to_json(f.child())}};
    }
  }
  return json();
}

int cmd_parse_formula(const std::string& text, const std::string& format) {
  try {
    cyberlogic::Formula f = cyberlogic::parse_formula(text);
    if (format == "json") {
      json out{{"version", 1},
               {"formula", cyberlogic::print_formula(f)},
               {"ast", ast_to_json(f)}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << cyberlogic::print_formula(f) << "\n";
    }
    return kOk;
  } catch (const cyberlogic::SyntaxError& err) {
    std::cerr << "offset " << err.offset << ": " << err.what() << "\n";
    return kSyntax;
  }
}

cyberlogic::Scenario load_scenario_arg(const std::string& arg) {
  if (arg == "jon-snow") return cyberlogic::build_jon_snow();
  return cyberlogic::load_scenario_file(arg);
}

int cmd_run_scenario(const std::string& arg, const std::string& format,
                     const ModeOverrides& modes) {
  cyberlogic::Scenario s;
  try {
    s = load_scenario_arg(arg);
  } catch (const cyberlogic::EngineError& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  }
  env_overrides().apply(s.config);
  modes.apply(s.config);
  try {
    cyberlogic::ScenarioReport report = cyberlogic::run_scenario(s);
    if (format == "json")
      std::cout << cyberlogic::report_to_json(report).dump(2) << "\n";
    else
      std::cout << cyberlogic::report_to_table(report);
    return report.alerts.empty() ? kOk : kAlert;
  } catch (const cyberlogic::StepFailure& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  } catch (const cyberlogic::EngineError& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  }
}

int cmd_check_demand(const std::string& path, const std::string& demand_id,
                     const std::string& format, const ModeOverrides& modes) {
  try {
    cyberlogic::Scenario s = load_scenario_arg(path);
    env_overrides().apply(s.config);
    modes.apply(s.config);
    if (s.demands.empty()) {
      std::cerr << "fixture declares no demand\n";
      return kBadInput;
    }
    const cyberlogic::SchengenDemand* demand = &s.demands.front();
    if (!demand_id.empty()) {
      demand = nullptr;
      for (const auto& d : s.demands)
        if (d.id == demand_id) demand = &d;
      if (!demand) {
        std::cerr << "no demand named " << demand_id << "\n";
        return kBadInput;
      }
    }
    cyberlogic::KnowledgeBase kb = cyberlogic::KnowledgeBase::create();
    for (const auto& a : s.authorities) kb = kb.with_authority(a);
    for (const auto& fact : s.initial_facts) {
      cyberlogic::Formula f = cyberlogic::parse_formula(fact);
      kb = kb.assert_fact(f.claimer(), f.access(), f.when(), f.child());
    }
    cyberlogic::ValidationReport report = cyberlogic::validate_demand(
        demand->form.requester, *demand, s.registry, kb, s.config);
    if (format == "json")
      std::cout << cyberlogic::validation_report_to_json(report).dump(2) << "\n";
    else
      std::cout << cyberlogic::validation_report_to_table(report);
    return report.all_passed() ? kOk : kValidationFailed;
  } catch (const cyberlogic::EngineError& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  } catch (const cyberlogic::SyntaxError& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  }
}

int cmd_ledger_audit(const std::string& path, const std::string& format) {
  try {
    cyberlogic::LoadResult loaded = cyberlogic::load_ledger_file(path);
    cyberlogic::AuditReport report;
    if (!loaded.ledger) {
      report = cyberlogic::AuditReport::broken(loaded.bad_entry.value_or(0));
    } else {
      report = cyberlogic::audit_chain(*loaded.ledger);
    }
    if (format == "json") {
      json out{{"version", 1}, {"ok", report.ok}};
      if (report.first_bad_index) out["first_bad_index"] = *report.first_bad_index;
      std::cout << out.dump(2) << "\n";
    } else if (report.ok) {
      std::cout << "ok (" << loaded.ledger->size() << " entries)\n";
    } else {
      std::cout << "broken at entry " << *report.first_bad_index << "\n";
    }
    return report.ok ? kOk : kBrokenChain;
  } catch (const cyberlogic::EngineError& err) {
    std::cerr << err.what() << "\n";
    return kBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust-management engine for evidential protocols"};
  app.require_subcommand(1);

  std::string format = "table";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();

  ModeOverrides modes;
  std::string passport_rule, itinerary_rule;
  bool controls_on = false, controls_off = false;
  app.add_option("--passport-rule", passport_rule, "passport validity semantics")
      ->check(CLI::IsMember({"prose", "paper"}));
  app.add_option("--itinerary-rule", itinerary_rule, "itinerary chaining semantics")
      ->check(CLI::IsMember({"strict", "relaxed"}));
  app.add_flag("--record-controls", controls_on, "write control reads to the ledger");
  app.add_flag("--no-record-controls", controls_off, "do not write control reads");

  std::string formula_text;
  CLI::App* parse_cmd = app.add_subcommand("parse-formula", "parse an attestation formula");
  parse_cmd->fallthrough();
  parse_cmd->add_option("formula", formula_text, "formula text")->required();

  std::string scenario_arg;
  CLI::App* run_cmd =
      app.add_subcommand("run-scenario", "replay a scenario fixture (or the built-in jon-snow)");
  run_cmd->fallthrough();
  run_cmd->add_option("scenario", scenario_arg, "fixture path or 'jon-snow'")->required();

  std::string demand_path, demand_id;
  CLI::App* check_cmd =
      app.add_subcommand("check-demand", "validate the seven requirements of a demand");
  check_cmd->fallthrough();
  check_cmd->add_option("fixture", demand_path, "fixture path or 'jon-snow'")->required();
  check_cmd->add_option("--demand", demand_id, "demand id (default: first in fixture)");

  std::string ledger_path;
  CLI::App* audit_cmd = app.add_subcommand("ledger-audit", "verify a persisted ledger's chain");
  audit_cmd->fallthrough();
  audit_cmd->add_option("ledger", ledger_path, "ledger file")->required();

  CLI11_PARSE(app, argc, argv);

  if (!passport_rule.empty())
    modes.passport = passport_rule == "paper" ? cyberlogic::PassportRule::Paper
                                              : cyberlogic::PassportRule::Prose;
  if (!itinerary_rule.empty())
    modes.itinerary = itinerary_rule == "strict" ? cyberlogic::ItineraryRule::Strict
                                                 : cyberlogic::ItineraryRule::Relaxed;
  if (controls_on) modes.record_controls = true;
  if (controls_off) modes.record_controls = false;

  if (parse_cmd->parsed()) return cmd_parse_formula(formula_text, format);
  if (run_cmd->parsed()) return cmd_run_scenario(scenario_arg, format, modes);
  if (check_cmd->parsed()) return cmd_check_demand(demand_path, demand_id, format, modes);
  if (audit_cmd->parsed()) return cmd_ledger_audit(ledger_path, format);
  return kBadInput;
}
