#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyberlogic/ledger.hpp"

namespace cyberlogic {

enum class PassportRule {
  Prose,  // expiry >= departure + 3 months
  Paper,  // expiry <= departure - 3 months, the definition taken literally
};

enum class ItineraryRule {
  Strict,   // legs chain by exact equality of times
  Relaxed,  // legs may leave gaps: dep >= expected start, final arr >= end
};

struct ProtocolConfig {
  PassportRule passport_rule = PassportRule::Prose;
  ItineraryRule itinerary_rule = ItineraryRule::Relaxed;
  bool record_controls = true;
};

// ---------------------------------------------------------------------------
// Requirement predicates

bool valid_passport_at(const Passport& p, Time departure, PassportRule rule);

bool travels_validation(const std::vector<Flight>& itinerary, const KnowledgeBase& kb);
bool travels_consistency(const std::vector<Flight>& itinerary, Time tfrom, Time tto,
                         ItineraryRule rule);

bool accommodations_validation(const std::vector<Accommodation>& lodgings,
                               const KnowledgeBase& kb);
bool accommodations_consistency(const std::vector<Accommodation>& lodgings, Time tfrom, Time tto,
                                ItineraryRule rule);

// Per-country sufficient-means rules, looked up by name in the registry.
// "employment_attested" (the default) accepts employment whose employer claim
// is derivable; "any_attested" extends that to bank and credit-card claims
// and positive cash; "accept_all" / "reject_all" are what they say.
bool means_accepted(const std::string& rule_name, const SufficientMeans& means,
                    const std::string& requester, const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Demand validation: the seven requirements

struct RequirementRow {
  int index = 0;         // 1..7
  std::string name;      // form, photo, itinerary, insurance, lodging,
                         // sufficient-means, passport
  bool passed = false;
  std::vector<Attestation> required_claims;  // direct claims the row rests on
  std::vector<std::string> accountable;      // one per claim, rolled up
  std::string detail;                        // failure explanation
};

struct ValidationReport {
  std::vector<RequirementRow> rows;  // always exactly 7
  bool all_passed() const;
};

// Evaluates the seven requirement conjuncts of a demand against the
// knowledge base. Throws UnknownCountry when the form's country has no
// consulate.
ValidationReport validate_demand(const std::string& requester, const SchengenDemand& d,
                                 const CountryRegistry& reg, const KnowledgeBase& kb,
                                 const ProtocolConfig& config = {});

// ---------------------------------------------------------------------------
// Action claims: protocol steps leave an attested trace in the KB. The
// action proposition is action(verb, h<digest of the canonical arguments>).

Formula make_demand_action(const std::string& requester, const CountryName& country,
                           const SchengenDemand& d);
Formula make_deliver_action(const std::string& consulate, const Visa& v);
Formula make_control_action(const std::string& officer, const Visa& v);
Formula make_suspect_answer_action(const std::string& officer, const Visa& v,
                                   const std::vector<Query>& qs);

// The proposition delegated from the consulate to the requester at delivery;
// rolling it up from the requester yields the consulate as accountable.
Formula delivering_prop(const std::string& consulate, const std::string& requester,
                        const Visa& v, Time t);

// ---------------------------------------------------------------------------
// Protocol steps

struct DemandOutcome {
  Ledger ledger;
  KnowledgeBase kb;
  LedgerEntry entry;
};

// Writes the demand and records the requester's at-t claim of the action.
// Throws TimestampMismatch when d.time_stamp != t.
DemandOutcome demand(const std::string& requester, const CountryName& country,
                     const SchengenDemand& d, Time t, const Ledger& ledger,
                     const KnowledgeBase& kb);

// The demanding policy: the stamp matches and the requester claimed the
// demand action at t.
bool check_demanding(const std::string& requester, Time t, const CountryName& country,
                     const SchengenDemand& d, const KnowledgeBase& kb);

struct DeliverSuccess {
  Ledger ledger;
  KnowledgeBase kb;
  LedgerEntry entry;
  ValidationReport report;
};

struct Refusal {
  bool demanding_ok = false;
  ValidationReport report;
};

using DeliverResult = std::variant<DeliverSuccess, Refusal>;

// Resolves the visa's demand, re-checks the demanding policy and the seven
// requirements; on success writes Deliver(v), records the consulate's
// before-t claim of the delivering validation plus its at-t action claim,
// and delegates (D1) the validation claim to the requester. Throws
// NotConsulate and NoMatchingDemand.
DeliverResult deliver(const std::string& consulate, const std::string& requester, const Visa& v,
                      Time t, const Ledger& ledger, const KnowledgeBase& kb,
                      const CountryRegistry& reg, const ProtocolConfig& config = {});

struct ControlReport {
  std::string officer;
  std::string visa_id;
  Time time = 0;
  ValidationReport requirements;  // with per-claim accountable roll-up
  Ledger ledger;
  KnowledgeBase kb;
};

// Reads the visa's chain back to its demand, records the control (both on
// the ledger and as the officer's at-t claim) and rolls up the accountable
// authority for every requirement. Throws NotOfficer, NotCurrentTime,
// UnknownVisa.
ControlReport control(const std::string& officer, const Visa& v, Time t, const Ledger& ledger,
                      const KnowledgeBase& kb, const CountryRegistry& reg,
                      const ProtocolConfig& config = {});

struct SuspectOutcome {
  Answer answer;
  Ledger ledger;
  KnowledgeBase kb;
};

// Verifies the queries against the ledger and KB; either way the officer's
// answer claim is recorded (a false alert proves all queries hold, a raised
// alert carries the suspicious claims). Throws NotOfficer and the verify
// errors.
SuspectOutcome suspect(const std::string& officer, const Visa& v, const std::vector<Query>& qs,
                       Time t, const Ledger& ledger, const KnowledgeBase& kb,
                       const CountryRegistry& reg, const ProtocolConfig& config = {});

// ---------------------------------------------------------------------------
// Built-in queries

// The sufficient-means suspicion: fails when the means claim is not
// derivable or when another authority claims the same exclusive role for a
// different subject at an earlier-or-equal tick (someone else took the job).
Query sufficient_means_query(const CountryRegistry& reg, const ProtocolConfig& config = {});

// Re-checks one requirement row (1..7) of the visa's demand.
Query requirement_query(int row, const CountryRegistry& reg, const ProtocolConfig& config = {});

}  // namespace cyberlogic
