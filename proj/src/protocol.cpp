#include "cyberlogic/protocol.hpp"

#include <algorithm>

#include "cyberlogic/errors.hpp"

namespace cyberlogic {

bool valid_passport_at(const Passport& p, Time departure, PassportRule rule) {
  if (rule == PassportRule::Prose) return p.expiry >= departure + months(3);
  // Literal reading, with natural-number subtraction truncating at zero.
  Time cutoff = departure >= months(3) ? departure - months(3) : 0;
  return p.expiry <= cutoff;
}

namespace {

bool holds_direct(const KnowledgeBase& kb, const std::string& claimer, const Formula& prop) {
  return kb.has_authority(claimer) &&
         kb.holds(claimer, Access::Direct, TimeQualifier::untimed(), prop).holds();
}

bool derivable(const KnowledgeBase& kb, const std::string& claimer, const Formula& prop) {
  return kb.has_authority(claimer) && kb.derive_indirect(claimer, prop).holds();
}

template <typename T>
bool legs_consistent(const std::vector<T>& legs, std::size_t i, Time tfrom, Time tto,
                     ItineraryRule rule, Time (*start)(const T&), Time (*end)(const T&)) {
  if (i == legs.size()) return true;
  const T& a = legs[i];
  if (!(start(a) < end(a))) return false;
  bool chained = rule == ItineraryRule::Strict ? start(a) == tfrom : start(a) >= tfrom;
  if (!chained) return false;
  if (i + 1 == legs.size())
    return rule == ItineraryRule::Strict ? end(a) == tto : end(a) >= tto;
  return legs_consistent(legs, i + 1, end(a), tto, rule, start, end);
}

Time flight_dep(const Flight& f) { return f.dep_time; }
Time flight_arr(const Flight& f) { return f.arr_time; }
Time lodging_from(const Accommodation& a) { return a.from; }
Time lodging_to(const Accommodation& a) { return a.to; }

}  // namespace

bool travels_validation(const std::vector<Flight>& itinerary, const KnowledgeBase& kb) {
  return std::all_of(itinerary.begin(), itinerary.end(), [&](const Flight& fl) {
    return holds_direct(kb, fl.airline, prop_travel_valid(fl));
  });
}

bool travels_consistency(const std::vector<Flight>& itinerary, Time tfrom, Time tto,
                         ItineraryRule rule) {
  return legs_consistent(itinerary, 0, tfrom, tto, rule, flight_dep, flight_arr);
}

bool accommodations_validation(const std::vector<Accommodation>& lodgings,
                               const KnowledgeBase& kb) {
  return std::all_of(lodgings.begin(), lodgings.end(), [&](const Accommodation& ac) {
    return holds_direct(kb, ac.shelter_at, prop_accommodation_valid(ac));
  });
}

bool accommodations_consistency(const std::vector<Accommodation>& lodgings, Time tfrom, Time tto,
                                ItineraryRule rule) {
  return legs_consistent(lodgings, 0, tfrom, tto, rule, lodging_from, lodging_to);
}

bool means_accepted(const std::string& rule_name, const SufficientMeans& means,
                    const std::string& requester, const KnowledgeBase& kb) {
  using Kind = SufficientMeans::Kind;
  if (rule_name == "accept_all") return true;
  if (rule_name == "reject_all") return false;
  if (rule_name == "employment_attested")
    return means.kind == Kind::Employment && derivable(kb, means.authority, means.claim);
  if (rule_name == "any_attested") {
    if (means.kind == Kind::Cash) return means.amount > 0 && derivable(kb, requester, means.claim);
    return derivable(kb, means.authority, means.claim);
  }
  throw EngineError(ErrorCode::BadFixture, "unknown means rule " + rule_name);
}

bool ValidationReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const RequirementRow& r) { return r.passed; });
}

namespace {

std::string rule_for(const CountryRegistry& reg, const CountryName& country) {
  auto it = reg.means_rule.find(country);
  return it == reg.means_rule.end() ? "employment_attested" : it->second;
}

Attestation direct_claim(const std::string& claimer, Formula prop) {
  return Attestation{claimer, Access::Direct, TimeQualifier::untimed(), std::move(prop), {}};
}

Attestation means_claim(const SufficientMeans& m, const std::string& requester) {
  const std::string& claimer = m.kind == SufficientMeans::Kind::Cash ? requester : m.authority;
  return direct_claim(claimer, m.claim);
}

void roll_up(RequirementRow& row, const KnowledgeBase& kb) {
  for (const Attestation& claim : row.required_claims) {
    auto acc = kb.has_authority(claim.claimer)
                   ? kb.accountable_for(claim.claimer, claim.prop)
                   : std::nullopt;
    row.accountable.push_back(acc.value_or(claim.claimer));
  }
}

}  // namespace

ValidationReport validate_demand(const std::string& requester, const SchengenDemand& d,
                                 const CountryRegistry& reg, const KnowledgeBase& kb,
                                 const ProtocolConfig& config) {
  const std::string& consulate = reg.consulate(d.form.country);
  ValidationReport report;

  auto add_row = [&](int index, std::string name, bool passed,
                     std::vector<Attestation> claims, std::string detail) {
    RequirementRow row{index, std::move(name), passed, std::move(claims), {}, std::move(detail)};
    roll_up(row, kb);
    report.rows.push_back(std::move(row));
  };

  auto claims_hold = [&](const std::vector<Attestation>& claims) {
    return std::all_of(claims.begin(), claims.end(), [&](const Attestation& c) {
      return holds_direct(kb, c.claimer, c.prop);
    });
  };

  // 1. The application form, vouched for by the consulate.
  {
    std::vector<Attestation> claims{direct_claim(consulate, prop_form_requirement(d.form))};
    bool ok = claims_hold(claims);
    add_row(1, "form", ok, std::move(claims), ok ? "" : "form requirement not attested");
  }

  // 2. The passport photo, vouched for by the requester.
  {
    std::vector<Attestation> claims{direct_claim(requester, prop_passport_photo(d.picture))};
    bool ok = claims_hold(claims);
    add_row(2, "photo", ok, std::move(claims), ok ? "" : "photo not attested by requester");
  }

  // 3. Itinerary: every leg attested by its airline, legs consistent with the
  //    form's dates.
  {
    std::vector<Attestation> claims;
    for (const Flight& fl : d.travels)
      claims.push_back(direct_claim(fl.airline, prop_travel_valid(fl)));
    bool attested = claims_hold(claims);
    bool consistent =
        travels_consistency(d.travels, d.form.from, d.form.to, config.itinerary_rule);
    std::string detail = attested ? (consistent ? "" : "itinerary inconsistent")
                                  : "flight not attested by airline";
    add_row(3, "itinerary", attested && consistent, std::move(claims), std::move(detail));
  }

  // 4. Travel health insurance, vouched for by its emitter.
  {
    std::vector<Attestation> claims{
        direct_claim(d.insurance.insurer, prop_travel_health_valid(d.insurance))};
    bool ok = claims_hold(claims);
    add_row(4, "insurance", ok, std::move(claims), ok ? "" : "insurance not attested");
  }

  // 5. Accommodation for the whole stay, each shelter vouching for its part.
  {
    std::vector<Attestation> claims;
    for (const Accommodation& ac : d.lodgings)
      claims.push_back(direct_claim(ac.shelter_at, prop_accommodation_valid(ac)));
    bool attested = claims_hold(claims);
    bool consistent =
        accommodations_consistency(d.lodgings, d.form.from, d.form.to, config.itinerary_rule);
    std::string detail = attested ? (consistent ? "" : "lodging dates inconsistent")
                                  : "accommodation not attested";
    add_row(5, "lodging", attested && consistent, std::move(claims), std::move(detail));
  }

  // 6. Sufficient means, judged by the destination country's rule.
  {
    std::vector<Attestation> claims{means_claim(d.sufficient, requester)};
    bool ok = means_accepted(rule_for(reg, d.form.country), d.sufficient, requester, kb);
    add_row(6, "sufficient-means", ok, std::move(claims),
            ok ? "" : "means rejected by country rule");
  }

  // 7. Passport validity: issuer's claim plus the expiry window.
  {
    std::vector<Attestation> claims{
        direct_claim(d.pass.delivered_by, prop_valid_passport(d.pass))};
    bool attested = claims_hold(claims);
    bool window = valid_passport_at(d.pass, d.form.from, config.passport_rule);
    std::string detail = attested ? (window ? "" : "passport outside validity window")
                                  : "passport validity not attested";
    add_row(7, "passport", attested && window, std::move(claims), std::move(detail));
  }

  return report;
}

namespace {

Formula action_prop(const char* verb, const std::string& canonical_args) {
  Digest digest = sha256(canonical_args);
  return Formula::atom("action",
                       {Formula::atom(verb), Formula::atom("h" + to_hex(digest))});
}

}  // namespace

Formula make_demand_action(const std::string& requester, const CountryName& country,
                           const SchengenDemand& d) {
  Encoder e;
  e.str("demand");
  e.str(requester);
  e.str(country);
  encode(e, d);
  return action_prop("demand", e.bytes());
}

Formula make_deliver_action(const std::string& consulate, const Visa& v) {
  Encoder e;
  e.str("deliver");
  e.str(consulate);
  encode(e, v);
  return action_prop("deliver", e.bytes());
}

Formula make_control_action(const std::string& officer, const Visa& v) {
  Encoder e;
  e.str("control");
  e.str(officer);
  encode(e, v);
  return action_prop("control", e.bytes());
}

Formula make_suspect_answer_action(const std::string& officer, const Visa& v,
                                   const std::vector<Query>& qs) {
  Encoder e;
  e.str("suspect");
  e.str(officer);
  encode(e, v);
  e.u64(qs.size());
  for (const Query& q : qs) {
    e.str(q.name);
    e.u64(q.params.size());
    for (const std::string& p : q.params) e.str(p);
  }
  return action_prop("suspect", e.bytes());
}

Formula delivering_prop(const std::string& consulate, const std::string& requester,
                        const Visa& v, Time t) {
  return Formula::atom("delivering_validation",
                       {Formula::atom(consulate), Formula::atom(requester),
                        Formula::atom(v.id), Formula::time_lit(t)});
}

DemandOutcome demand(const std::string& requester, const CountryName& country,
                     const SchengenDemand& d, Time t, const Ledger& ledger,
                     const KnowledgeBase& kb) {
  if (d.time_stamp != t)
    throw EngineError(ErrorCode::TimestampMismatch,
                      d.id + " stamped " + std::to_string(d.time_stamp) + ", demanded at " +
                          std::to_string(t));
  Ledger next = write(ledger, requester, DemandTx{d}, t);
  KnowledgeBase kb2 = kb.assert_fact(requester, Access::Direct, TimeQualifier::at(t),
                                     make_demand_action(requester, country, d));
  return DemandOutcome{next, std::move(kb2), next.entries().back()};
}

bool check_demanding(const std::string& requester, Time t, const CountryName& country,
                     const SchengenDemand& d, const KnowledgeBase& kb) {
  if (d.time_stamp != t) return false;
  if (!kb.has_authority(requester)) return false;
  return kb
      .holds(requester, Access::Direct, TimeQualifier::at(t),
             make_demand_action(requester, country, d))
      .holds();
}

DeliverResult deliver(const std::string& consulate, const std::string& requester, const Visa& v,
                      Time t, const Ledger& ledger, const KnowledgeBase& kb,
                      const CountryRegistry& reg, const ProtocolConfig& config) {
  if (reg.consulate(v.country) != consulate)
    throw EngineError(ErrorCode::NotConsulate, consulate + " does not deliver for " + v.country);
  std::optional<SchengenDemand> d = find_demand_by_digest(ledger, v.demand_ref);
  if (!d) throw EngineError(ErrorCode::NoMatchingDemand, "visa " + v.id);

  auto country_it = reg.country_of.find(consulate);
  const CountryName& country = country_it != reg.country_of.end() ? country_it->second : v.country;
  bool demanding_ok = check_demanding(requester, d->time_stamp, country, *d, kb);
  ValidationReport report = validate_demand(requester, *d, reg, kb, config);
  if (!demanding_ok || !report.all_passed()) return Refusal{demanding_ok, std::move(report)};

  Ledger next = write(ledger, consulate, DeliverTx{v}, t);
  Formula validation = delivering_prop(consulate, requester, v, t);
  KnowledgeBase kb2 =
      kb.assert_fact(consulate, Access::Direct, TimeQualifier::before(t), validation);
  kb2 = kb2.assert_fact(consulate, Access::Direct, TimeQualifier::at(t),
                        make_deliver_action(consulate, v));
  kb2 = kb2.assert_delegation({DelegationKind::D1, requester, consulate, validation});
  return DeliverSuccess{next, std::move(kb2), next.entries().back(), std::move(report)};
}

ControlReport control(const std::string& officer, const Visa& v, Time t, const Ledger& ledger,
                      const KnowledgeBase& kb, const CountryRegistry& reg,
                      const ProtocolConfig& config) {
  if (!reg.is_officer(officer)) throw EngineError(ErrorCode::NotOfficer, officer);
  if (t != kb.current_time())
    throw EngineError(ErrorCode::NotCurrentTime,
                      std::to_string(t) + " != " + std::to_string(kb.current_time()));
  ReadResult rr =
      read(ledger, officer, TransactionSelector::control_of(v), t, config.record_controls);
  if (rr.entries.empty())
    throw EngineError(ErrorCode::UnknownVisa, "no deliver entry for " + v.id);
  std::optional<SchengenDemand> d = find_demand_by_digest(ledger, v.demand_ref);
  if (!d) throw EngineError(ErrorCode::UnknownVisa, "dangling demand reference of " + v.id);

  KnowledgeBase kb2 = kb.assert_fact(officer, Access::Direct, TimeQualifier::at(t),
                                     make_control_action(officer, v));
  ValidationReport requirements = validate_demand(d->form.requester, *d, reg, kb2, config);
  return ControlReport{officer, v.id, t, std::move(requirements), std::move(rr.ledger),
                       std::move(kb2)};
}

SuspectOutcome suspect(const std::string& officer, const Visa& v, const std::vector<Query>& qs,
                       Time t, const Ledger& ledger, const KnowledgeBase& kb,
                       const CountryRegistry& reg, const ProtocolConfig& config) {
  (void)config;
  if (!reg.is_officer(officer)) throw EngineError(ErrorCode::NotOfficer, officer);
  Answer answer = verify(ledger, officer, v, qs, kb);
  KnowledgeBase kb2 = kb.assert_fact(officer, Access::Direct, TimeQualifier::at(t),
                                     make_suspect_answer_action(officer, v, qs));
  return SuspectOutcome{std::move(answer), ledger, std::move(kb2)};
}

namespace {

// Shapes like KingOfTheNorth(JonSnow, 60): the head names an exclusive role,
// the first argument its holder, the second the tick of the claim.
struct RoleClaim {
  std::string head;
  std::string subject;
  Time at;
};

std::optional<RoleClaim> role_claim(const Formula& f) {
  if (f.kind() != Formula::Kind::Atom || f.args().size() != 2) return std::nullopt;
  const Formula& subject = f.args()[0];
  const Formula& tick = f.args()[1];
  if (subject.kind() != Formula::Kind::Atom || !subject.args().empty()) return std::nullopt;
  if (tick.kind() != Formula::Kind::TimeLit) return std::nullopt;
  return RoleClaim{f.head(), subject.head(), tick.time_value()};
}

}  // namespace

Query sufficient_means_query(const CountryRegistry& reg, const ProtocolConfig& config) {
  (void)config;
  Query q;
  q.name = "sufficient_means";
  q.eval = [reg](const QueryContext& ctx) -> QueryOutcome {
    const SufficientMeans& m = ctx.demand.sufficient;
    const std::string& requester = ctx.demand.form.requester;
    Attestation claim = means_claim(m, requester);
    if (!means_accepted(rule_for(reg, ctx.demand.form.country), m, requester, ctx.kb))
      return {false, {claim}};
    if (auto own = role_claim(m.claim)) {
      for (const Attestation& fact : ctx.kb.facts()) {
        auto other = role_claim(fact.prop);
        if (other && other->head == own->head && other->subject != own->subject &&
            other->at <= own->at) {
          // Someone else held the role by then; the means claim is suspect.
          return {false, {claim}};
        }
      }
    }
    return {true, {}};
  };
  return q;
}

Query requirement_query(int row, const CountryRegistry& reg, const ProtocolConfig& config) {
  if (row < 1 || row > 7)
    throw EngineError(ErrorCode::BadFixture, "requirement row out of range");
  Query q;
  q.name = "requirement";
  q.params = {std::to_string(row)};
  q.eval = [row, reg, config](const QueryContext& ctx) -> QueryOutcome {
    ValidationReport report =
        validate_demand(ctx.demand.form.requester, ctx.demand, reg, ctx.kb, config);
    const RequirementRow& r = report.rows[static_cast<std::size_t>(row - 1)];
    if (r.passed) return {true, {}};
    std::vector<Attestation> suspects = r.required_claims;
    if (suspects.empty()) {
      suspects.push_back(direct_claim(ctx.demand.form.requester,
                                      Formula::atom("requirement", {Formula::atom(r.name)})));
    }
    return {false, std::move(suspects)};
  };
  return q;
}

}  // namespace cyberlogic
