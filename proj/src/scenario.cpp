#include "cyberlogic/scenario.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cyberlogic/formula_text.hpp"

namespace cyberlogic {

using json = nlohmann::ordered_json;

std::string print_claim(const Attestation& a) {
  return print_formula(Formula::attest(a.claimer, a.access, a.when, a.prop));
}

namespace {

const SchengenDemand& demand_by_id(const Scenario& s, const std::string& id) {
  for (const SchengenDemand& d : s.demands)
    if (d.id == id) return d;
  throw EngineError(ErrorCode::BadFixture, "undeclared demand " + id);
}

const VisaSpec& visa_spec_by_id(const Scenario& s, const std::string& id) {
  for (const VisaSpec& v : s.visas)
    if (v.id == id) return v;
  throw EngineError(ErrorCode::BadFixture, "undeclared visa " + id);
}

Query build_query(const QuerySpec& spec, const CountryRegistry& reg,
                  const ProtocolConfig& config) {
  if (spec.name == "sufficient_means") return sufficient_means_query(reg, config);
  if (spec.name == "requirement") {
    if (spec.params.size() != 1)
      throw EngineError(ErrorCode::BadFixture, "requirement query needs one row parameter");
    return requirement_query(std::stoi(spec.params[0]), reg, config);
  }
  throw EngineError(ErrorCode::BadFixture, "unknown query " + spec.name);
}

const char* step_kind_name(Step::Kind k) {
  switch (k) {
    case Step::Kind::Demand: return "demand";
    case Step::Kind::Deliver: return "deliver";
    case Step::Kind::Control: return "control";
    case Step::Kind::Suspect: return "suspect";
    case Step::Kind::Tick: return "tick";
    case Step::Kind::AssertFact: return "assert";
  }
  return "?";
}

struct RunState {
  Ledger ledger;
  KnowledgeBase kb = KnowledgeBase::create();
  std::map<std::string, Digest> demand_entry_hash;
  std::map<std::string, Visa> visas;  // materialized at delivery
  Time last_tick = 0;
};

void assert_fact_text(KnowledgeBase& kb, const std::string& text) {
  Formula f = parse_formula(text);
  if (f.kind() != Formula::Kind::Attest)
    throw EngineError(ErrorCode::BadFixture, "fact is not an attestation: " + text);
  kb = kb.assert_fact(f.claimer(), f.access(), f.when(), f.child());
}

void add_accountability(ScenarioReport& report, const std::string& requirement,
                        const Attestation& claim, const std::string& accountable) {
  std::string printed = print_claim(claim);
  for (const AccountabilityEntry& e : report.accountability)
    if (e.requirement == requirement && e.claim == printed) return;
  report.accountability.push_back({requirement, printed, accountable});
}

}  // namespace

ScenarioReport run_scenario(const Scenario& s) {
  ScenarioReport report;
  report.scenario = s.name;

  RunState st;
  for (const Authority& a : s.authorities) st.kb = st.kb.with_authority(a);
  for (const std::string& fact : s.initial_facts) assert_fact_text(st.kb, fact);

  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const Step& step = s.steps[i];
    StepOutcome outcome;
    outcome.index = i;
    outcome.kind = step_kind_name(step.kind);
    try {
      switch (step.kind) {
        case Step::Kind::Tick: {
          if (step.t < st.last_tick)
            throw EngineError(ErrorCode::BadFixture, "tick times must be non-decreasing");
          st.last_tick = step.t;
          st.kb = st.kb.record_tick(step.t);
          outcome.detail = "time " + std::to_string(step.t);
          break;
        }
        case Step::Kind::AssertFact: {
          assert_fact_text(st.kb, step.fact);
          outcome.detail = step.fact;
          break;
        }
        case Step::Kind::Demand: {
          const SchengenDemand& d = demand_by_id(s, step.demand_id);
          DemandOutcome out = demand(step.requester, step.country, d, step.t, st.ledger, st.kb);
          st.ledger = std::move(out.ledger);
          st.kb = std::move(out.kb);
          st.demand_entry_hash[step.demand_id] = out.entry.hash;
          outcome.detail = step.demand_id + " by " + step.requester;
          break;
        }
        case Step::Kind::Deliver: {
          const VisaSpec& spec = visa_spec_by_id(s, step.visa_id);
          Visa v{spec.id, spec.delivered_by, spec.duration, spec.kind, spec.country, kZeroDigest};
          auto ref = st.demand_entry_hash.find(spec.demand_id);
          if (ref != st.demand_entry_hash.end()) v.demand_ref = ref->second;
          DeliverResult res =
              deliver(step.consulate, step.requester, v, step.t, st.ledger, st.kb, s.registry,
                      s.config);
          if (const auto* refusal = std::get_if<Refusal>(&res)) {
            std::string why = refusal->demanding_ok ? "requirement failed:" : "demanding failed";
            for (const RequirementRow& row : refusal->report.rows)
              if (!row.passed) why += " " + row.name;
            throw EngineError(ErrorCode::BadFixture, "delivery refused (" + why + ")");
          }
          auto& ok = std::get<DeliverSuccess>(res);
          st.ledger = std::move(ok.ledger);
          st.kb = std::move(ok.kb);
          st.visas[spec.id] = v;
          outcome.detail = spec.id + " to " + step.requester;
          break;
        }
        case Step::Kind::Control: {
          auto it = st.visas.find(step.visa_id);
          if (it == st.visas.end())
            throw EngineError(ErrorCode::UnknownVisa, step.visa_id + " never delivered");
          ControlReport cr =
              control(step.officer, it->second, step.t, st.ledger, st.kb, s.registry, s.config);
          st.ledger = std::move(cr.ledger);
          st.kb = std::move(cr.kb);
          for (const RequirementRow& row : cr.requirements.rows) {
            for (std::size_t c = 0; c < row.required_claims.size(); ++c)
              add_accountability(report, row.name, row.required_claims[c], row.accountable[c]);
          }
          outcome.detail = step.visa_id + " by " + step.officer;
          break;
        }
        case Step::Kind::Suspect: {
          auto it = st.visas.find(step.visa_id);
          if (it == st.visas.end())
            throw EngineError(ErrorCode::UnknownVisa, step.visa_id + " never delivered");
          std::vector<Query> qs;
          for (const QuerySpec& spec : step.queries)
            qs.push_back(build_query(spec, s.registry, s.config));
          SuspectOutcome out =
              suspect(step.officer, it->second, qs, step.t, st.ledger, st.kb, s.registry,
                      s.config);
          st.ledger = std::move(out.ledger);
          st.kb = std::move(out.kb);
          if (!out.answer.valid) {
            report.alerts.push_back(out.answer);
            for (const Attestation& claim : out.answer.suspects) {
              std::string accountable =
                  st.kb.has_authority(claim.claimer)
                      ? st.kb.accountable_for(claim.claimer, claim.prop).value_or(claim.claimer)
                      : claim.claimer;
              add_accountability(report, "alert", claim, accountable);
            }
            outcome.detail = "alert raised";
          } else {
            outcome.detail = "false alert";
          }
          outcome.answer = out.answer;
          break;
        }
      }
    } catch (const EngineError& err) {
      throw StepFailure(i, err.code, err.what());
    } catch (const SyntaxError& err) {
      throw StepFailure(i, ErrorCode::BadFixture, err.what());
    }
    report.steps.push_back(std::move(outcome));
  }
  return report;
}

// ---------------------------------------------------------------------------
// The reference workload. Ticks are days since the start of the demand year:
// the stay spans day 151 to day 242, the demand is stamped day 60, the visa
// delivered day 90 and the control happens day 181. The newspaper claims the
// requester's job changed hands on day 55, five days before the demand.
Scenario build_jon_snow() {
  Scenario s;
  s.name = "jon-snow";

  s.registry.countries = {"France", "Essos"};
  s.registry.consulate_of = {{"France", "CFrance"}, {"Essos", "Cwinterfell"}};
  s.registry.country_of = {{"CFrance", "France"}, {"Cwinterfell", "Essos"}};
  s.registry.schengen_officers = {"JaimeL"};
  s.registry.means_rule = {{"France", "employment_attested"}};

  s.authorities = {
      {"JonSnow", "Jon Snow"},
      {"CFrance", "French consulate"},
      {"Cwinterfell", "Winterfell kingdom"},
      {"Drogo", "Drogo airline"},
      {"IcyWall", "Icy Wall hotel"},
      {"ThreeEyedCrow", "Three-eyed crow & cie"},
      {"JaimeL", "Jaime L"},
      {"WinterfellTime", "Winterfell Times"},
      {"SansaStark", "Sansa Stark"},
  };

  const Time first_june = 151;
  const Time thirty_first_august = 242;
  const Time demand_t = 60;
  const Time deliver_t = 90;
  const Time suspicious_t = 181;

  SchengenDemand d;
  d.id = "JSdemand";
  d.form = {"JSform", first_june, thirty_first_august, "JonSnow", "France",
            "three month stay in Paris"};
  d.picture = {"JSpic", "jon-snow-portrait"};
  d.pass = {"JSpassport", "Cwinterfell", 600, {}, "JonSnow"};
  d.travels = {
      {"JSoutward", "Drogo", 3, "JonSnow", "Essos", first_june, "France", first_june + 1, 1, 2,
       100},
      {"JSreturn", "Drogo", 10, "JonSnow", "France", thirty_first_august, "Essos",
       thirty_first_august + 1, 2, 1, 100},
  };
  d.insurance = {"JSinsurance", "ThreeEyedCrow", "JonSnow", "TEC-889"};
  d.lodgings = {{"JSacc", "IcyWall", first_june, thirty_first_august}};
  d.sufficient = {SufficientMeans::Kind::Employment, "Cwinterfell", 0,
                  Formula::atom("KingOfTheNorth",
                                {Formula::atom("JonSnow"), Formula::time_lit(demand_t)})};
  d.time_stamp = demand_t;
  s.demands = {d};

  s.visas = {{"JSvisa", "CFrance", months(3), Formula::atom("short_stay_visa"), "France",
              "JSdemand"}};

  s.initial_facts = {
      "CFrance |> schengen_form_requirement(JSform)",
      "JonSnow |> passport_photo(JSpic)",
      "Drogo |> travel_valid(JSoutward)",
      "Drogo |> travel_valid(JSreturn)",
      "ThreeEyedCrow |> travel_health_valid(JSinsurance)",
      "IcyWall |> accommodation_valid(JSacc)",
      "Cwinterfell |> valid_passport(JSpassport)",
      "Cwinterfell |> KingOfTheNorth(JonSnow,60)",
      "WinterfellTime |> KingOfTheNorth(SansaStark,55)",
  };

  Step tick1{Step::Kind::Tick, demand_t, "", "", "", "", "", "", {}, ""};
  Step dem{Step::Kind::Demand, demand_t, "JonSnow", "", "", "France", "JSdemand", "", {}, ""};
  Step tick2{Step::Kind::Tick, deliver_t, "", "", "", "", "", "", {}, ""};
  Step del{Step::Kind::Deliver, deliver_t, "JonSnow", "CFrance", "", "", "", "JSvisa", {}, ""};
  Step tick3{Step::Kind::Tick, suspicious_t, "", "", "", "", "", "", {}, ""};
  Step ctl{Step::Kind::Control, suspicious_t, "", "", "JaimeL", "", "", "JSvisa", {}, ""};
  Step sus{Step::Kind::Suspect, suspicious_t, "", "", "JaimeL", "", "", "JSvisa",
           {{"sufficient_means", {}}}, ""};
  s.steps = {tick1, dem, tick2, del, tick3, ctl, sus};
  return s;
}

// ---------------------------------------------------------------------------
// Fixture and report serialization

namespace {

json config_to_json(const ProtocolConfig& c) {
  return json{
      {"passport_rule", c.passport_rule == PassportRule::Paper ? "paper" : "prose"},
      {"itinerary_rule", c.itinerary_rule == ItineraryRule::Strict ? "strict" : "relaxed"},
      {"record_controls", c.record_controls},
  };
}

ProtocolConfig config_from_json(const json& j) {
  ProtocolConfig c;
  if (j.contains("passport_rule"))
    c.passport_rule =
        j.at("passport_rule") == "paper" ? PassportRule::Paper : PassportRule::Prose;
  if (j.contains("itinerary_rule"))
    c.itinerary_rule =
        j.at("itinerary_rule") == "strict" ? ItineraryRule::Strict : ItineraryRule::Relaxed;
  if (j.contains("record_controls")) c.record_controls = j.at("record_controls").get<bool>();
  return c;
}

const char* means_kind_name(SufficientMeans::Kind k) {
  switch (k) {
    case SufficientMeans::Kind::BankStatement: return "bank_statement";
    case SufficientMeans::Kind::CreditCard: return "credit_card";
    case SufficientMeans::Kind::Cash: return "cash";
    case SufficientMeans::Kind::Employment: return "employment";
  }
  return "?";
}

SufficientMeans::Kind means_kind_from(const std::string& name) {
  if (name == "bank_statement") return SufficientMeans::Kind::BankStatement;
  if (name == "credit_card") return SufficientMeans::Kind::CreditCard;
  if (name == "cash") return SufficientMeans::Kind::Cash;
  if (name == "employment") return SufficientMeans::Kind::Employment;
  throw EngineError(ErrorCode::BadFixture, "unknown means kind " + name);
}

json demand_to_json(const SchengenDemand& d) {
  json flights = json::array();
  for (const Flight& f : d.travels) {
    flights.push_back(json{{"id", f.id},
                           {"airline", f.airline},
                           {"flight_no", f.flight_no},
                           {"passenger", f.passenger},
                           {"departure", {{"country", f.dep_country}, {"time", f.dep_time}}},
                           {"arrival", {{"country", f.arr_country}, {"time", f.arr_time}}},
                           {"dep_airport", f.dep_airport},
                           {"arr_airport", f.arr_airport},
                           {"price", f.price}});
  }
  json lodgings = json::array();
  for (const Accommodation& a : d.lodgings) {
    lodgings.push_back(
        json{{"id", a.id}, {"shelter_at", a.shelter_at}, {"from", a.from}, {"to", a.to}});
  }
  return json{
      {"id", d.id},
      {"form",
       {{"id", d.form.id},
        {"from", d.form.from},
        {"to", d.form.to},
        {"requester", d.form.requester},
        {"country", d.form.country},
        {"body", d.form.body}}},
      {"picture", {{"id", d.picture.id}, {"blob", d.picture.blob}}},
      {"pass",
       {{"id", d.pass.id},
        {"delivered_by", d.pass.delivered_by},
        {"expiry", d.pass.expiry},
        {"visas", d.pass.visas},
        {"holder", d.pass.holder}}},
      {"travels", flights},
      {"insurance",
       {{"id", d.insurance.id},
        {"insurer", d.insurance.insurer},
        {"insured", d.insurance.insured},
        {"policy", d.insurance.policy}}},
      {"lodgings", lodgings},
      {"sufficient",
       {{"kind", means_kind_name(d.sufficient.kind)},
        {"authority", d.sufficient.authority},
        {"amount", d.sufficient.amount},
        {"claim", print_formula(d.sufficient.claim)}}},
      {"time_stamp", d.time_stamp},
  };
}

SchengenDemand demand_from_json(const json& j) {
  SchengenDemand d;
  d.id = j.at("id").get<std::string>();
  const json& form = j.at("form");
  d.form = {form.at("id").get<std::string>(),     form.at("from").get<Time>(),
            form.at("to").get<Time>(),            form.at("requester").get<std::string>(),
            form.at("country").get<std::string>(), form.value("body", std::string())};
  const json& pic = j.at("picture");
  d.picture = {pic.at("id").get<std::string>(), pic.value("blob", std::string())};
  const json& pass = j.at("pass");
  d.pass = {pass.at("id").get<std::string>(), pass.at("delivered_by").get<std::string>(),
            pass.at("expiry").get<Time>(), pass.value("visas", std::vector<std::string>()),
            pass.at("holder").get<std::string>()};
  for (const json& f : j.at("travels")) {
    d.travels.push_back({f.at("id").get<std::string>(),
                         f.at("airline").get<std::string>(),
                         f.at("flight_no").get<std::uint64_t>(),
                         f.at("passenger").get<std::string>(),
                         f.at("departure").at("country").get<std::string>(),
                         f.at("departure").at("time").get<Time>(),
                         f.at("arrival").at("country").get<std::string>(),
                         f.at("arrival").at("time").get<Time>(),
                         f.at("dep_airport").get<std::uint64_t>(),
                         f.at("arr_airport").get<std::uint64_t>(),
                         f.at("price").get<std::uint64_t>()});
  }
  const json& ins = j.at("insurance");
  d.insurance = {ins.at("id").get<std::string>(), ins.at("insurer").get<std::string>(),
                 ins.value("insured", std::string()), ins.value("policy", std::string())};
  for (const json& a : j.at("lodgings")) {
    d.lodgings.push_back({a.at("id").get<std::string>(), a.at("shelter_at").get<std::string>(),
                          a.at("from").get<Time>(), a.at("to").get<Time>()});
  }
  const json& m = j.at("sufficient");
  d.sufficient = {means_kind_from(m.at("kind").get<std::string>()),
                  m.value("authority", std::string()), m.value("amount", std::uint64_t(0)),
                  parse_formula(m.at("claim").get<std::string>())};
  d.time_stamp = j.at("time_stamp").get<Time>();
  return d;
}

json step_to_json(const Step& s) {
  json j{{"op", step_kind_name(s.kind)}, {"t", s.t}};
  switch (s.kind) {
    case Step::Kind::Demand:
      j["requester"] = s.requester;
      j["country"] = s.country;
      j["demand"] = s.demand_id;
      break;
    case Step::Kind::Deliver:
      j["consulate"] = s.consulate;
      j["requester"] = s.requester;
      j["visa"] = s.visa_id;
      break;
    case Step::Kind::Control:
      j["officer"] = s.officer;
      j["visa"] = s.visa_id;
      break;
    case Step::Kind::Suspect: {
      j["officer"] = s.officer;
      j["visa"] = s.visa_id;
      json queries = json::array();
      for (const QuerySpec& q : s.queries)
        queries.push_back(json{{"name", q.name}, {"params", q.params}});
      j["queries"] = queries;
      break;
    }
    case Step::Kind::Tick:
      break;
    case Step::Kind::AssertFact:
      j["fact"] = s.fact;
      break;
  }
  return j;
}

Step step_from_json(const json& j) {
  Step s;
  std::string op = j.at("op").get<std::string>();
  s.t = j.value("t", Time(0));
  if (op == "tick") {
    s.kind = Step::Kind::Tick;
  } else if (op == "assert") {
    s.kind = Step::Kind::AssertFact;
    s.fact = j.at("fact").get<std::string>();
  } else if (op == "demand") {
    s.kind = Step::Kind::Demand;
    s.requester = j.at("requester").get<std::string>();
    s.country = j.at("country").get<std::string>();
    s.demand_id = j.at("demand").get<std::string>();
  } else if (op == "deliver") {
    s.kind = Step::Kind::Deliver;
    s.consulate = j.at("consulate").get<std::string>();
    s.requester = j.at("requester").get<std::string>();
    s.visa_id = j.at("visa").get<std::string>();
  } else if (op == "control") {
    s.kind = Step::Kind::Control;
    s.officer = j.at("officer").get<std::string>();
    s.visa_id = j.at("visa").get<std::string>();
  } else if (op == "suspect") {
    s.kind = Step::Kind::Suspect;
    s.officer = j.at("officer").get<std::string>();
    s.visa_id = j.at("visa").get<std::string>();
    for (const json& q : j.value("queries", json::array()))
      s.queries.push_back(
          {q.at("name").get<std::string>(), q.value("params", std::vector<std::string>())});
  } else {
    throw EngineError(ErrorCode::BadFixture, "unknown step op " + op);
  }
  return s;
}

}  // namespace

json scenario_to_json(const Scenario& s) {
  json authorities = json::array();
  for (const Authority& a : s.authorities)
    authorities.push_back(json{{"id", a.id}, {"name", a.display_name}});

  json consulates = json::object();
  for (const auto& [country, consulate] : s.registry.consulate_of) consulates[country] = consulate;
  json means_rules = json::object();
  for (const auto& [country, rule] : s.registry.means_rule) means_rules[country] = rule;

  json demands = json::array();
  for (const SchengenDemand& d : s.demands) demands.push_back(demand_to_json(d));

  json visas = json::array();
  for (const VisaSpec& v : s.visas) {
    visas.push_back(json{{"id", v.id},
                         {"delivered_by", v.delivered_by},
                         {"duration", v.duration},
                         {"kind", print_formula(v.kind)},
                         {"country", v.country},
                         {"demand", v.demand_id}});
  }

  json steps = json::array();
  for (const Step& st : s.steps) steps.push_back(step_to_json(st));

  return json{
      {"version", 1},
      {"name", s.name},
      {"config", config_to_json(s.config)},
      {"registry",
       {{"countries", std::vector<std::string>(s.registry.countries.begin(),
                                               s.registry.countries.end())},
        {"consulates", consulates},
        {"officers", std::vector<std::string>(s.registry.schengen_officers.begin(),
                                              s.registry.schengen_officers.end())},
        {"means_rules", means_rules}}},
      {"authorities", authorities},
      {"facts", s.initial_facts},
      {"demands", demands},
      {"visas", visas},
      {"steps", steps},
  };
}

Scenario scenario_from_json(const json& j) {
  try {
    if (j.value("version", 0) != 1)
      throw EngineError(ErrorCode::BadFixture, "unsupported fixture version");
    Scenario s;
    s.name = j.at("name").get<std::string>();
    if (j.contains("config")) s.config = config_from_json(j.at("config"));

    const json& reg = j.at("registry");
    for (const json& c : reg.at("countries")) s.registry.countries.insert(c.get<std::string>());
    for (auto it = reg.at("consulates").begin(); it != reg.at("consulates").end(); ++it) {
      s.registry.consulate_of[it.key()] = it.value().get<std::string>();
      s.registry.country_of[it.value().get<std::string>()] = it.key();
    }
    for (const json& o : reg.value("officers", json::array()))
      s.registry.schengen_officers.insert(o.get<std::string>());
    if (reg.contains("means_rules")) {
      for (auto it = reg.at("means_rules").begin(); it != reg.at("means_rules").end(); ++it)
        s.registry.means_rule[it.key()] = it.value().get<std::string>();
    }

    for (const json& a : j.at("authorities"))
      s.authorities.push_back(
          {a.at("id").get<std::string>(), a.value("name", a.at("id").get<std::string>())});
    for (const json& f : j.value("facts", json::array())) {
      std::string text = f.get<std::string>();
      if (parse_formula(text).kind() != Formula::Kind::Attest)
        throw EngineError(ErrorCode::BadFixture, "fact is not an attestation: " + text);
      s.initial_facts.push_back(std::move(text));
    }
    for (const json& d : j.value("demands", json::array()))
      s.demands.push_back(demand_from_json(d));
    for (const json& v : j.value("visas", json::array())) {
      s.visas.push_back({v.at("id").get<std::string>(),
                         v.at("delivered_by").get<std::string>(),
                         v.at("duration").get<Time>(),
                         parse_formula(v.at("kind").get<std::string>()),
                         v.at("country").get<std::string>(),
                         v.at("demand").get<std::string>()});
    }
    for (const json& st : j.value("steps", json::array())) s.steps.push_back(step_from_json(st));
    return s;
  } catch (const json::exception& err) {
    throw EngineError(ErrorCode::BadFixture, err.what());
  } catch (const SyntaxError& err) {
    throw EngineError(ErrorCode::BadFixture, err.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EngineError(ErrorCode::BadFixture, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& err) {
    throw EngineError(ErrorCode::BadFixture, err.what());
  }
  return scenario_from_json(j);
}

namespace {

json answer_to_json(const Answer& a) {
  json suspects = json::array();
  for (const Attestation& claim : a.suspects) {
    suspects.push_back(json{{"claimer", claim.claimer},
                            {"prop", print_formula(claim.prop)},
                            {"formula", print_claim(claim)}});
  }
  return json{{"valid", a.valid}, {"suspects", suspects}};
}

}  // namespace

json report_to_json(const ScenarioReport& r) {
  json steps = json::array();
  for (const StepOutcome& s : r.steps) {
    json step{{"index", s.index}, {"kind", s.kind}, {"ok", s.ok}, {"detail", s.detail}};
    if (s.answer) step["answer"] = answer_to_json(*s.answer);
    steps.push_back(std::move(step));
  }
  json alerts = json::array();
  for (const Answer& a : r.alerts) alerts.push_back(answer_to_json(a));
  json accountability = json::array();
  for (const AccountabilityEntry& e : r.accountability) {
    accountability.push_back(json{
        {"requirement", e.requirement}, {"claim", e.claim}, {"accountable", e.accountable}});
  }
  return json{{"version", 1},
              {"scenario", r.scenario},
              {"steps", steps},
              {"alerts", alerts},
              {"accountability", accountability}};
}

std::string report_to_table(const ScenarioReport& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario << "\n";
  for (const StepOutcome& s : r.steps) {
    os << "  step " << s.index << "  " << s.kind << (s.ok ? "  ok" : "  FAILED");
    if (!s.detail.empty()) os << "  (" << s.detail << ")";
    os << "\n";
    if (s.answer && !s.answer->valid) {
      for (const Attestation& claim : s.answer->suspects)
        os << "      suspicious: " << print_claim(claim) << "\n";
    }
  }
  os << "alerts: " << r.alerts.size() << "\n";
  if (!r.accountability.empty()) {
    os << "accountability:\n";
    for (const AccountabilityEntry& e : r.accountability)
      os << "  [" << e.requirement << "] " << e.claim << "  ->  " << e.accountable << "\n";
  }
  return os.str();
}

json validation_report_to_json(const ValidationReport& r) {
  json rows = json::array();
  for (const RequirementRow& row : r.rows) {
    json claims = json::array();
    for (std::size_t i = 0; i < row.required_claims.size(); ++i) {
      claims.push_back(json{{"claim", print_claim(row.required_claims[i])},
                            {"accountable", row.accountable[i]}});
    }
    rows.push_back(json{{"index", row.index},
                        {"name", row.name},
                        {"passed", row.passed},
                        {"claims", claims},
                        {"detail", row.detail}});
  }
  return json{{"version", 1}, {"rows", rows}, {"all_passed", r.all_passed()}};
}

std::string validation_report_to_table(const ValidationReport& r) {
  std::ostringstream os;
  for (const RequirementRow& row : r.rows) {
    os << row.index << ". " << row.name << ": " << (row.passed ? "pass" : "FAIL");
    if (!row.detail.empty()) os << "  (" << row.detail << ")";
    os << "\n";
    for (std::size_t i = 0; i < row.required_claims.size(); ++i) {
      os << "     " << print_claim(row.required_claims[i]) << "  ->  " << row.accountable[i]
         << "\n";
    }
  }
  os << (r.all_passed() ? "all requirements satisfied" : "validation failed") << "\n";
  return os.str();
}

}  // namespace cyberlogic
