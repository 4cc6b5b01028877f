#include <doctest.h>

#include <set>

#include "cyberlogic/formula_text.hpp"
#include "cyberlogic/scenario.hpp"
#include "support/oracles.hpp"

using namespace cyberlogic;
using testsupport::make_rng;
using testsupport::pick;
using testsupport::pick_time;

namespace {

KnowledgeBase kb_of(const Scenario& s, const std::set<std::string>& skip = {}) {
  KnowledgeBase kb = KnowledgeBase::create();
  for (const Authority& a : s.authorities) kb = kb.with_authority(a);
  for (const std::string& text : s.initial_facts) {
    if (skip.count(text)) continue;
    Formula f = parse_formula(text);
    kb = kb.assert_fact(f.claimer(), f.access(), f.when(), f.child());
  }
  return kb;
}

// The scenario world right after the demand was written.
struct DemandedWorld {
  Scenario s;
  KnowledgeBase kb;
  Ledger ledger;
  SchengenDemand d;
  Visa visa;
};

DemandedWorld demanded_world(const std::set<std::string>& skip = {}) {
  DemandedWorld w{build_jon_snow(), KnowledgeBase::create(), {}, {}, {}};
  w.kb = kb_of(w.s, skip);
  w.d = w.s.demands.front();
  w.kb = w.kb.record_tick(w.d.time_stamp);
  DemandOutcome out = demand("JonSnow", "France", w.d, w.d.time_stamp, w.ledger, w.kb);
  w.ledger = std::move(out.ledger);
  w.kb = std::move(out.kb);
  const VisaSpec& spec = w.s.visas.front();
  w.visa = Visa{spec.id, spec.delivered_by, spec.duration, spec.kind, spec.country,
                out.entry.hash};
  return w;
}

std::vector<Flight> flights_of(const std::vector<testsupport::LegSpan>& legs) {
  std::vector<Flight> out;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    out.push_back({"fl" + std::to_string(i), "air", i, "p", "X", legs[i].start, "Y",
                   legs[i].end, 0, 0, 0});
  }
  return out;
}

std::vector<Accommodation> lodgings_of(const std::vector<testsupport::LegSpan>& legs) {
  std::vector<Accommodation> out;
  for (std::size_t i = 0; i < legs.size(); ++i)
    out.push_back({"acc" + std::to_string(i), "host", legs[i].start, legs[i].end});
  return out;
}

}  // namespace

TEST_CASE("passport validity window") {
  Passport p{"pp", "state", 0, {}, "holder"};

  SUBCASE("prose semantics: expiry at least three months past departure") {
    p.expiry = 290;
    CHECK(valid_passport_at(p, 200, PassportRule::Prose));  // boundary: 200 + 90
    p.expiry = 289;
    CHECK_FALSE(valid_passport_at(p, 200, PassportRule::Prose));
    p.expiry = 200;
    CHECK_FALSE(valid_passport_at(p, 200, PassportRule::Prose));
  }

  SUBCASE("paper semantics taken literally") {
    p.expiry = 110;
    CHECK(valid_passport_at(p, 200, PassportRule::Paper));  // boundary: 200 - 90
    p.expiry = 111;
    CHECK_FALSE(valid_passport_at(p, 200, PassportRule::Paper));
    // truncating subtraction below three months
    p.expiry = 0;
    CHECK(valid_passport_at(p, 10, PassportRule::Paper));
    p.expiry = 1;
    CHECK_FALSE(valid_passport_at(p, 10, PassportRule::Paper));
  }

  SUBCASE("sweep against the inequality oracle in both modes") {
    for (Time expiry = 0; expiry <= 400; ++expiry) {
      p.expiry = expiry;
      CHECK(valid_passport_at(p, 200, PassportRule::Prose) == (expiry >= 290));
      CHECK(valid_passport_at(p, 200, PassportRule::Paper) == (expiry <= 110));
    }
  }
}

TEST_CASE("itinerary validation is a universal over airline claims") {
  Scenario s = build_jon_snow();
  const std::vector<Flight>& travels = s.demands.front().travels;

  CHECK(travels_validation({}, KnowledgeBase::create()));
  CHECK(travels_validation(travels, kb_of(s)));
  CHECK_FALSE(travels_validation(travels, kb_of(s, {"Drogo |> travel_valid(JSreturn)"})));
}

TEST_CASE("accommodation validation checks each shelter's claim") {
  Scenario s = build_jon_snow();
  const std::vector<Accommodation>& lodgings = s.demands.front().lodgings;

  CHECK(accommodations_validation({}, KnowledgeBase::create()));
  CHECK(accommodations_validation(lodgings, kb_of(s)));

  // same dates attested by the wrong authority
  KnowledgeBase kb = kb_of(s, {"IcyWall |> accommodation_valid(JSacc)"});
  kb = kb.assert_fact("Drogo", Access::Direct, TimeQualifier::untimed(),
                      prop_accommodation_valid(lodgings.front()));
  CHECK_FALSE(accommodations_validation(lodgings, kb));
}

TEST_CASE("consistency fixpoints: fixed cases") {
  CHECK(travels_consistency({}, 3, 1, ItineraryRule::Strict));
  CHECK(accommodations_consistency({}, 0, 5, ItineraryRule::Strict));

  std::vector<Flight> single = flights_of({{0, 1}});
  CHECK(travels_consistency(single, 0, 1, ItineraryRule::Strict));
  CHECK_FALSE(travels_consistency(single, 0, 2, ItineraryRule::Strict));
  CHECK(travels_consistency(single, 0, 1, ItineraryRule::Relaxed));

  // the reference itinerary has a three-month stay between the legs:
  // the literal recursion rejects it, the relaxed mode accepts it
  Scenario s = build_jon_snow();
  const SchengenDemand& d = s.demands.front();
  CHECK_FALSE(travels_consistency(d.travels, d.form.from, d.form.to, ItineraryRule::Strict));
  CHECK(travels_consistency(d.travels, d.form.from, d.form.to, ItineraryRule::Relaxed));

  // the single accommodation spans the stay exactly, both modes accept
  CHECK(accommodations_consistency(d.lodgings, d.form.from, d.form.to, ItineraryRule::Strict));
  CHECK(accommodations_consistency(d.lodgings, d.form.from, d.form.to, ItineraryRule::Relaxed));
}

TEST_CASE("consistency fixpoints match the oracle on random small instances") {
  auto rng = make_rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<testsupport::LegSpan> legs;
    std::size_t n = pick(rng, 4);
    for (std::size_t i = 0; i < n; ++i) legs.push_back({pick_time(rng, 5), pick_time(rng, 5)});
    Time tfrom = pick_time(rng, 5);
    Time tto = pick_time(rng, 5);
    for (bool relaxed : {false, true}) {
      ItineraryRule rule = relaxed ? ItineraryRule::Relaxed : ItineraryRule::Strict;
      bool expected = testsupport::legs_oracle(legs, tfrom, tto, relaxed);
      CHECK(travels_consistency(flights_of(legs), tfrom, tto, rule) == expected);
      CHECK(accommodations_consistency(lodgings_of(legs), tfrom, tto, rule) == expected);
    }
  }
}

TEST_CASE("the validation report always has the seven requirement rows") {
  Scenario s = build_jon_snow();
  const SchengenDemand& d = s.demands.front();
  ValidationReport report = validate_demand("JonSnow", d, s.registry, kb_of(s), s.config);

  REQUIRE(report.rows.size() == 7);
  const char* names[] = {"form",    "photo",            "itinerary", "insurance",
                         "lodging", "sufficient-means", "passport"};
  for (int i = 0; i < 7; ++i) {
    CHECK(report.rows[i].index == i + 1);
    CHECK(report.rows[i].name == names[i]);
    CHECK(report.rows[i].passed);
    CHECK_FALSE(report.rows[i].required_claims.empty());
  }
  CHECK(report.all_passed());

  // the accountable claimers the definitions name
  CHECK(report.rows[0].required_claims[0].claimer == "CFrance");
  CHECK(report.rows[1].required_claims[0].claimer == "JonSnow");
  CHECK(report.rows[2].required_claims[0].claimer == "Drogo");
  CHECK(report.rows[3].required_claims[0].claimer == "ThreeEyedCrow");
  CHECK(report.rows[4].required_claims[0].claimer == "IcyWall");
  CHECK(report.rows[5].required_claims[0].claimer == "Cwinterfell");
  CHECK(report.rows[6].required_claims[0].claimer == "Cwinterfell");
}

TEST_CASE("deleting one supporting attestation fails exactly its row") {
  Scenario s = build_jon_snow();
  const SchengenDemand& d = s.demands.front();
  struct Deletion {
    const char* fact;
    int row;  // 1-based
  };
  const Deletion deletions[] = {
      {"CFrance |> schengen_form_requirement(JSform)", 1},
      {"JonSnow |> passport_photo(JSpic)", 2},
      {"Drogo |> travel_valid(JSoutward)", 3},
      {"ThreeEyedCrow |> travel_health_valid(JSinsurance)", 4},
      {"IcyWall |> accommodation_valid(JSacc)", 5},
      {"Cwinterfell |> KingOfTheNorth(JonSnow,60)", 6},
      {"Cwinterfell |> valid_passport(JSpassport)", 7},
  };
  for (const Deletion& del : deletions) {
    CAPTURE(del.fact);
    ValidationReport report =
        validate_demand("JonSnow", d, s.registry, kb_of(s, {del.fact}), s.config);
    for (const RequirementRow& row : report.rows)
      CHECK(row.passed == (row.index != del.row));
  }
}

TEST_CASE("an empty itinerary with equal endpoints is vacuously consistent") {
  Scenario s = build_jon_snow();
  SchengenDemand d = s.demands.front();
  d.travels.clear();
  d.form.from = d.form.to = 151;  // degenerate stay
  ValidationReport report = validate_demand("JonSnow", d, s.registry, kb_of(s), s.config);
  CHECK(report.rows[2].passed);
}

TEST_CASE("validation of an unknown country is an error") {
  Scenario s = build_jon_snow();
  SchengenDemand d = s.demands.front();
  d.form.country = "Atlantis";
  CHECK_THROWS_AS(validate_demand("JonSnow", d, s.registry, kb_of(s), s.config), EngineError);
}

TEST_CASE("means rules") {
  Scenario s = build_jon_snow();
  KnowledgeBase kb = kb_of(s);
  const SufficientMeans& employment = s.demands.front().sufficient;

  CHECK(means_accepted("employment_attested", employment, "JonSnow", kb));
  SufficientMeans cash{SufficientMeans::Kind::Cash, "", 500, Formula::atom("has_cash")};
  CHECK_FALSE(means_accepted("employment_attested", cash, "JonSnow", kb));
  CHECK(means_accepted("accept_all", cash, "JonSnow", kb));
  CHECK_FALSE(means_accepted("reject_all", employment, "JonSnow", kb));
  CHECK_THROWS_AS(means_accepted("no_such_rule", employment, "JonSnow", kb), EngineError);

  KnowledgeBase with_cash_claim = kb.assert_fact("JonSnow", Access::Direct,
                                                 TimeQualifier::untimed(), cash.claim);
  CHECK(means_accepted("any_attested", cash, "JonSnow", with_cash_claim));
  CHECK_FALSE(means_accepted("any_attested", cash, "JonSnow", kb));
}

TEST_CASE("demand writes the transaction and the requester's action claim") {
  Scenario s = build_jon_snow();
  KnowledgeBase kb = kb_of(s).record_tick(60);
  const SchengenDemand& d = s.demands.front();

  CHECK_FALSE(check_demanding("JonSnow", 60, "France", d, kb));

  DemandOutcome out = demand("JonSnow", "France", d, 60, Ledger(), kb);
  CHECK(out.ledger.size() == 1);
  CHECK(transaction_kind(out.ledger.entries()[0].tx) == "demand");
  CHECK(check_demanding("JonSnow", 60, "France", d, out.kb));
  CHECK_FALSE(check_demanding("JonSnow", 61, "France", d, out.kb));

  CHECK_THROWS_AS(demand("JonSnow", "France", d, 61, Ledger(), kb), EngineError);
}

TEST_CASE("two demands by distinct requesters keep their order") {
  Scenario s = build_jon_snow();
  KnowledgeBase kb = kb_of(s).record_tick(60);
  SchengenDemand d1 = s.demands.front();
  SchengenDemand d2 = d1;
  d2.id = "JSdemand2";
  d2.form.requester = "SansaStark";

  DemandOutcome first = demand("JonSnow", "France", d1, 60, Ledger(), kb);
  DemandOutcome second = demand("SansaStark", "France", d2, 60, first.ledger, first.kb);
  REQUIRE(second.ledger.size() == 2);
  CHECK(second.ledger.entries()[0].author == "JonSnow");
  CHECK(second.ledger.entries()[1].author == "SansaStark");
}

TEST_CASE("delivery: success delegates presentation and keeps the consulate accountable") {
  DemandedWorld w = demanded_world();
  w.kb = w.kb.record_tick(90);
  DeliverResult res = deliver("CFrance", "JonSnow", w.visa, 90, w.ledger, w.kb, w.s.registry,
                              w.s.config);
  REQUIRE(std::holds_alternative<DeliverSuccess>(res));
  const DeliverSuccess& ok = std::get<DeliverSuccess>(res);
  CHECK(ok.ledger.size() == 2);
  CHECK(transaction_kind(ok.ledger.entries()[1].tx) == "deliver");

  Formula validation = delivering_prop("CFrance", "JonSnow", w.visa, 90);
  CHECK(ok.kb.accountable_for("JonSnow", validation) == "CFrance");
  CHECK(ok.kb.holds("CFrance", Access::Direct, TimeQualifier::before(90), validation).holds());

  // delivery soundness: validation still passes post hoc
  CHECK(validate_demand("JonSnow", w.d, w.s.registry, ok.kb, w.s.config).all_passed());

  // round-trip: reading by visa finds the deliver entry, whose visa resolves
  // back to the written demand
  ReadResult by_visa = read(ok.ledger, "anyone", TransactionSelector::deliver_of(w.visa), 90);
  REQUIRE(by_visa.entries.size() == 1);
  const Visa& stored = std::get<DeliverTx>(by_visa.entries[0].tx).visa;
  auto resolved = find_demand_by_digest(ok.ledger, stored.demand_ref);
  REQUIRE(resolved.has_value());
  CHECK(resolved->id == w.d.id);
}

TEST_CASE("delivery errors and refusals") {
  DemandedWorld w = demanded_world();

  SUBCASE("only the country's consulate delivers") {
    CHECK_THROWS_AS(
        deliver("Cwinterfell", "JonSnow", w.visa, 90, w.ledger, w.kb, w.s.registry, w.s.config),
        EngineError);
  }

  SUBCASE("a dangling demand reference has no matching demand") {
    Visa dangling = w.visa;
    dangling.demand_ref = kZeroDigest;
    CHECK_THROWS_AS(
        deliver("CFrance", "JonSnow", dangling, 90, w.ledger, w.kb, w.s.registry, w.s.config),
        EngineError);
  }

  SUBCASE("a missing requirement attestation refuses with that row named") {
    DemandedWorld broken = demanded_world({"ThreeEyedCrow |> travel_health_valid(JSinsurance)"});
    DeliverResult res = deliver("CFrance", "JonSnow", broken.visa, 90, broken.ledger, broken.kb,
                                broken.s.registry, broken.s.config);
    REQUIRE(std::holds_alternative<Refusal>(res));
    const Refusal& refusal = std::get<Refusal>(res);
    CHECK(refusal.demanding_ok);
    for (const RequirementRow& row : refusal.report.rows)
      CHECK(row.passed == (row.index != 4));
  }

  SUBCASE("a demand nobody claimed fails the demanding policy") {
    // write the demand transaction directly, bypassing the action claim
    Scenario s = build_jon_snow();
    KnowledgeBase kb = kb_of(s).record_tick(60);
    Ledger ledger = write(Ledger(), "JonSnow", DemandTx{s.demands.front()}, 60);
    Visa v{"JSvisa", "CFrance", 90, Formula::atom("short_stay_visa"), "France",
           ledger.entries()[0].hash};
    DeliverResult res = deliver("CFrance", "JonSnow", v, 90, ledger, kb, s.registry, s.config);
    REQUIRE(std::holds_alternative<Refusal>(res));
    CHECK_FALSE(std::get<Refusal>(res).demanding_ok);
  }
}

namespace {

// Delivered world: demand + deliver executed, ticks up to the control time.
struct DeliveredWorld {
  DemandedWorld base;
  Ledger ledger;
  KnowledgeBase kb;
};

DeliveredWorld delivered_world(const std::set<std::string>& skip = {}) {
  DemandedWorld w = demanded_world(skip);
  w.kb = w.kb.record_tick(90);
  DeliverResult res =
      deliver("CFrance", "JonSnow", w.visa, 90, w.ledger, w.kb, w.s.registry, w.s.config);
  const DeliverSuccess& ok = std::get<DeliverSuccess>(res);
  return DeliveredWorld{w, ok.ledger, ok.kb};
}

}  // namespace

TEST_CASE("control rolls up the accountable authority per requirement") {
  DeliveredWorld w = delivered_world();
  KnowledgeBase kb = w.kb.record_tick(181);

  ControlReport report =
      control("JaimeL", w.base.visa, 181, w.ledger, kb, w.base.s.registry, w.base.s.config);
  CHECK(report.ledger.size() == w.ledger.size() + 1);  // the control is recorded
  CHECK(transaction_kind(report.ledger.entries().back().tx) == "control");

  const RequirementRow& means = report.requirements.rows[5];
  REQUIRE(means.name == "sufficient-means");
  REQUIRE_FALSE(means.accountable.empty());
  CHECK(means.accountable[0] == "Cwinterfell");

  SUBCASE("controls can be kept off the ledger") {
    ProtocolConfig config = w.base.s.config;
    config.record_controls = false;
    ControlReport quiet =
        control("JaimeL", w.base.visa, 181, w.ledger, kb, w.base.s.registry, config);
    CHECK(quiet.ledger.size() == w.ledger.size());
  }

  SUBCASE("only schengen officers control, and only at the current time") {
    CHECK_THROWS_AS(
        control("Drogo", w.base.visa, 181, w.ledger, kb, w.base.s.registry, w.base.s.config),
        EngineError);
    CHECK_THROWS_AS(
        control("JaimeL", w.base.visa, 180, w.ledger, kb, w.base.s.registry, w.base.s.config),
        EngineError);
  }
}

TEST_CASE("suspicion: the scenario query raises the employment claim") {
  DeliveredWorld w = delivered_world();
  KnowledgeBase kb = w.kb.record_tick(181);
  std::vector<Query> qs = {sufficient_means_query(w.base.s.registry, w.base.s.config)};

  SuspectOutcome out =
      suspect("JaimeL", w.base.visa, qs, 181, w.ledger, kb, w.base.s.registry, w.base.s.config);
  CHECK_FALSE(out.answer.valid);
  REQUIRE(out.answer.suspects.size() == 1);
  CHECK(out.answer.suspects[0].claimer == "Cwinterfell");
  CHECK(out.answer.suspects[0].prop == parse_formula("KingOfTheNorth(JonSnow,60)"));

  SUBCASE("without the newspaper clue the alert is false") {
    DeliveredWorld clean = delivered_world({"WinterfellTime |> KingOfTheNorth(SansaStark,55)"});
    KnowledgeBase kb2 = clean.kb.record_tick(181);
    SuspectOutcome ok = suspect("JaimeL", clean.base.visa, qs, 181, clean.ledger, kb2,
                                clean.base.s.registry, clean.base.s.config);
    CHECK(ok.answer.valid);
    CHECK(ok.answer.suspects.empty());
  }

  SUBCASE("non-officers cannot suspect") {
    CHECK_THROWS_AS(suspect("Drogo", w.base.visa, qs, 181, w.ledger, kb, w.base.s.registry,
                            w.base.s.config),
                    EngineError);
  }
}

TEST_CASE("control never changes what a later verify answers") {
  DeliveredWorld w = delivered_world();
  KnowledgeBase kb = w.kb.record_tick(181);
  std::vector<Query> qs = {sufficient_means_query(w.base.s.registry, w.base.s.config),
                           requirement_query(4, w.base.s.registry, w.base.s.config)};

  Answer before = verify(w.ledger, "JaimeL", w.base.visa, qs, kb);
  ControlReport report =
      control("JaimeL", w.base.visa, 181, w.ledger, kb, w.base.s.registry, w.base.s.config);
  Answer after = verify(report.ledger, "JaimeL", w.base.visa, qs, report.kb);
  CHECK(before.valid == after.valid);
  CHECK(before.suspects.size() == after.suspects.size());
}

TEST_CASE("requirement queries re-check one row and suspect its claims") {
  DeliveredWorld w = delivered_world();
  std::vector<Query> qs = {requirement_query(4, w.base.s.registry, w.base.s.config)};
  Answer sound = verify(w.ledger, "JaimeL", w.base.visa, qs, w.kb);
  CHECK(sound.valid);

  // rebuild the world without the insurer's claim but with a valid delivery
  // path: delete the fact after delivery so only the re-check sees its absence
  KnowledgeBase without = kb_of(w.base.s, {"ThreeEyedCrow |> travel_health_valid(JSinsurance)"});
  Answer broken = verify(w.ledger, "JaimeL", w.base.visa, qs, without);
  CHECK_FALSE(broken.valid);
  REQUIRE(broken.suspects.size() == 1);
  CHECK(broken.suspects[0].claimer == "ThreeEyedCrow");
}

TEST_CASE("mode flags flip only their own requirement row") {
  DemandedWorld w = demanded_world();

  ProtocolConfig relaxed = w.s.config;  // itinerary relaxed, passport prose
  ProtocolConfig strict = relaxed;
  strict.itinerary_rule = ItineraryRule::Strict;
  ProtocolConfig paper = relaxed;
  paper.passport_rule = PassportRule::Paper;

  ValidationReport base = validate_demand("JonSnow", w.d, w.s.registry, w.kb, relaxed);
  ValidationReport strict_report = validate_demand("JonSnow", w.d, w.s.registry, w.kb, strict);
  ValidationReport paper_report = validate_demand("JonSnow", w.d, w.s.registry, w.kb, paper);

  for (int i = 0; i < 7; ++i) {
    if (i == 2)
      CHECK(base.rows[i].passed != strict_report.rows[i].passed);
    else
      CHECK(base.rows[i].passed == strict_report.rows[i].passed);
    if (i == 6)
      CHECK(base.rows[i].passed != paper_report.rows[i].passed);
    else
      CHECK(base.rows[i].passed == paper_report.rows[i].passed);
  }
}
