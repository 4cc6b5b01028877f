#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cyberlogic/authority.hpp"
#include "cyberlogic/errors.hpp"
#include "cyberlogic/formula.hpp"

namespace cyberlogic {

enum class DelegationKind { D1, D2, Dinf };

// Delegation of the right to claim prop from delegator to delegatee.
// D1: the delegator's direct claim carries over, delegator accountable.
// D2: some third authority attests prop and the delegator endorses that
//     attestation; the delegator, not the attester, is accountable.
// Dinf: the delegator's indirect claim carries over.
struct DelegationAssertion {
  DelegationKind kind;
  std::string delegatee;
  std::string delegator;
  Formula prop;

  friend bool operator==(const DelegationAssertion& a, const DelegationAssertion& b) {
    return a.kind == b.kind && a.delegatee == b.delegatee && a.delegator == b.delegator &&
           a.prop == b.prop;
  }
};

enum class RuleTag { Fact, D1, D2, Dinf };

const char* rule_tag_name(RuleTag tag);

struct ChainLink {
  std::string authority;
  RuleTag rule;
};

// How an indirect claim bottoms out in a direct fact. The accountable
// authority is the terminal attester, except across a D2 link where it is
// the endorsing delegator.
struct DerivationChain {
  std::vector<ChainLink> links;
  std::string accountable;
};

struct Attestation {
  std::string claimer;
  Access access = Access::Direct;
  TimeQualifier when;
  Formula prop;
  std::optional<DerivationChain> provenance;  // empty for stored facts

  friend bool operator==(const Attestation& a, const Attestation& b) {
    return a.claimer == b.claimer && a.access == b.access && a.when == b.when && a.prop == b.prop;
  }
};

struct DerivationResult {
  enum class Status { Holds, NotDerivable, DepthLimitExceeded };
  Status status = Status::NotDerivable;
  std::optional<DerivationChain> chain;  // set iff status == Holds

  bool holds() const { return status == Status::Holds; }
};

struct KbConfig {
  std::size_t max_chain_depth = 64;
  std::size_t max_nesting = 8;
};

// Immutable fact base: attestations, delegations and observed time ticks.
// Every assertion returns an extended copy; values are safe to share across
// threads for read-only queries.
class KnowledgeBase {
 public:
  static KnowledgeBase create(KbConfig config = {});

  KnowledgeBase with_authority(Authority a) const;
  bool has_authority(const std::string& id) const;
  const Authority& authority(const std::string& id) const;  // throws UnknownAuthority
  std::vector<std::string> authority_ids() const;

  KnowledgeBase assert_fact(const std::string& claimer, Access access, TimeQualifier when,
                            Formula prop) const;
  KnowledgeBase assert_delegation(DelegationAssertion d) const;
  KnowledgeBase record_tick(Time t) const;

  // Direct queries match stored direct facts; indirect queries additionally
  // roll through the delegation closure down to a direct fact.
  DerivationResult holds(const std::string& claimer, Access access, const TimeQualifier& when,
                         const Formula& prop) const;

  // The untimed indirect query: shortest delegation chain, ties broken by
  // the lexicographically least authority-id sequence.
  DerivationResult derive_indirect(const std::string& claimer, const Formula& prop) const;

  // Accountable authority of the derivation chain, or nullopt when the claim
  // is not derivable.
  std::optional<std::string> accountable_for(const std::string& claimer,
                                             const Formula& prop) const;

  bool is_time(Time t) const;
  Time current_time() const;
  bool in_future(Time t) const;

  const std::vector<Attestation>& facts() const { return facts_; }
  const std::vector<DelegationAssertion>& delegations() const { return delegations_; }
  const std::set<Time>& ticks() const { return ticks_; }
  const KbConfig& config() const { return config_; }

 private:
  KnowledgeBase() = default;

  void require_authority(const std::string& id) const;
  DerivationResult search_indirect(const std::string& claimer, const Formula& prop,
                                   const TimeQualifier& when) const;

  std::map<std::string, Authority> authorities_;
  std::vector<Attestation> facts_;
  std::vector<DelegationAssertion> delegations_;
  std::set<Time> ticks_;
  KbConfig config_;
};

}  // namespace cyberlogic
