#include "cyberlogic/knowledge_base.hpp"

#include <algorithm>
#include <queue>
#include <utility>

namespace cyberlogic {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownAuthority: return "unknown authority";
    case ErrorCode::NestingLimitExceeded: return "nesting limit exceeded";
    case ErrorCode::SelfDelegation: return "self delegation";
    case ErrorCode::ClockRegression: return "clock regression";
    case ErrorCode::TimestampMismatch: return "timestamp mismatch";
    case ErrorCode::UnknownCountry: return "unknown country";
    case ErrorCode::UnknownVisa: return "unknown visa";
    case ErrorCode::EmptyQueryList: return "empty query list";
    case ErrorCode::NotConsulate: return "not the consulate";
    case ErrorCode::NoMatchingDemand: return "no matching demand";
    case ErrorCode::NotOfficer: return "not a schengen officer";
    case ErrorCode::NotCurrentTime: return "not the current time";
    case ErrorCode::BadFixture: return "bad fixture";
    case ErrorCode::BadLedgerFile: return "bad ledger file";
  }
  return "error";
}

const char* rule_tag_name(RuleTag tag) {
  switch (tag) {
    case RuleTag::Fact: return "fact";
    case RuleTag::D1: return "D1";
    case RuleTag::D2: return "D2";
    case RuleTag::Dinf: return "Dinf";
  }
  return "?";
}

bool qualifier_satisfies(const TimeQualifier& fact, const TimeQualifier& query) {
  using K = TimeQualifier::Kind;
  switch (query.kind()) {
    case K::Untimed:
      return true;
    case K::At:
      return fact.kind() == K::At && fact.time() == query.time();
    case K::Before:
      return (fact.kind() == K::At && fact.time() < query.time()) ||
             (fact.kind() == K::Before && fact.time() <= query.time());
    case K::After:
      return (fact.kind() == K::At && fact.time() > query.time()) ||
             (fact.kind() == K::After && fact.time() >= query.time());
  }
  return false;
}

KnowledgeBase KnowledgeBase::create(KbConfig config) {
  KnowledgeBase kb;
  kb.config_ = config;
  kb.authorities_.emplace(kTimeAuthorityId, Authority{kTimeAuthorityId, "time authority"});
  kb.ticks_.insert(0);
  kb.facts_.push_back(
      Attestation{kTimeAuthorityId, Access::Indirect, TimeQualifier::untimed(), hasbeen(0), {}});
  return kb;
}

KnowledgeBase KnowledgeBase::with_authority(Authority a) const {
  KnowledgeBase next = *this;
  next.authorities_[a.id] = std::move(a);
  return next;
}

bool KnowledgeBase::has_authority(const std::string& id) const {
  return authorities_.count(id) != 0;
}

const Authority& KnowledgeBase::authority(const std::string& id) const {
  auto it = authorities_.find(id);
  if (it == authorities_.end()) throw EngineError(ErrorCode::UnknownAuthority, id);
  return it->second;
}

std::vector<std::string> KnowledgeBase::authority_ids() const {
  std::vector<std::string> ids;
  ids.reserve(authorities_.size());
  for (const auto& [id, a] : authorities_) ids.push_back(id);
  return ids;
}

void KnowledgeBase::require_authority(const std::string& id) const {
  if (!has_authority(id)) throw EngineError(ErrorCode::UnknownAuthority, id);
}

namespace {

// Matches hasbeen(t); used to keep the tick set coherent with directly
// asserted time claims.
std::optional<Time> hasbeen_time(const Formula& prop) {
  if (prop.kind() != Formula::Kind::Atom || prop.head() != "hasbeen") return std::nullopt;
  if (prop.args().size() != 1 || prop.args()[0].kind() != Formula::Kind::TimeLit)
    return std::nullopt;
  return prop.args()[0].time_value();
}

}  // namespace

KnowledgeBase KnowledgeBase::assert_fact(const std::string& claimer, Access access,
                                         TimeQualifier when, Formula prop) const {
  require_authority(claimer);
  if (prop.attest_depth() > config_.max_nesting)
    throw EngineError(ErrorCode::NestingLimitExceeded,
                      "proposition nests deeper than " + std::to_string(config_.max_nesting));
  Attestation fact{claimer, access, when, std::move(prop), {}};
  if (std::find(facts_.begin(), facts_.end(), fact) != facts_.end()) return *this;
  KnowledgeBase next = *this;
  if (claimer == kTimeAuthorityId) {
    if (auto t = hasbeen_time(fact.prop)) next.ticks_.insert(*t);
  }
  next.facts_.push_back(std::move(fact));
  return next;
}

KnowledgeBase KnowledgeBase::assert_delegation(DelegationAssertion d) const {
  require_authority(d.delegatee);
  require_authority(d.delegator);
  if (d.delegatee == d.delegator) {
    if (d.kind != DelegationKind::Dinf)
      throw EngineError(ErrorCode::SelfDelegation, d.delegatee);
    return *this;  // Dinf self-delegation is inert
  }
  if (std::find(delegations_.begin(), delegations_.end(), d) != delegations_.end()) return *this;
  KnowledgeBase next = *this;
  next.delegations_.push_back(std::move(d));
  return next;
}

KnowledgeBase KnowledgeBase::record_tick(Time t) const {
  if (ticks_.count(t)) return *this;
  KnowledgeBase next = *this;
  next.ticks_.insert(t);
  Attestation fact{kTimeAuthorityId, Access::Indirect, TimeQualifier::untimed(), hasbeen(t), {}};
  if (std::find(next.facts_.begin(), next.facts_.end(), fact) == next.facts_.end())
    next.facts_.push_back(std::move(fact));
  return next;
}

bool KnowledgeBase::is_time(Time t) const { return ticks_.count(t) != 0; }

Time KnowledgeBase::current_time() const { return *ticks_.rbegin(); }

bool KnowledgeBase::in_future(Time t) const { return !is_time(t) && t > current_time(); }

namespace {

struct PartialPath {
  std::vector<std::string> ids;   // claimer first
  std::vector<RuleTag> hop_tags;  // tag of the delegation used at each hop

  // Chains compare by length, then by the id sequence.
  bool worse_than(const PartialPath& other) const {
    if (ids.size() != other.ids.size()) return ids.size() > other.ids.size();
    return ids > other.ids;
  }
};

struct PathOrder {
  bool operator()(const PartialPath& a, const PartialPath& b) const { return a.worse_than(b); }
};

struct Candidate {
  std::size_t length;
  std::vector<std::string> ids;
  DerivationChain chain;

  bool better_than(const Candidate& other) const {
    if (length != other.length) return length < other.length;
    return ids < other.ids;
  }
};

}  // namespace

DerivationResult KnowledgeBase::search_indirect(const std::string& claimer, const Formula& prop,
                                                const TimeQualifier& when) const {
  auto direct_fact_at = [&](const std::string& id) {
    return std::any_of(facts_.begin(), facts_.end(), [&](const Attestation& f) {
      return f.claimer == id && f.access == Access::Direct && f.prop == prop &&
             qualifier_satisfies(f.when, when);
    });
  };
  auto stored_fact_at = [&](const std::string& id) {
    return std::any_of(facts_.begin(), facts_.end(), [&](const Attestation& f) {
      return f.claimer == id && f.prop == prop && qualifier_satisfies(f.when, when);
    });
  };
  auto direct_endorsement_at = [&](const std::string& id, const std::string& attester) {
    return std::any_of(facts_.begin(), facts_.end(), [&](const Attestation& f) {
      return f.claimer == id && f.access == Access::Direct &&
             is_endorsement_of(f.prop, attester, prop);
    });
  };

  std::optional<Candidate> best;
  auto offer = [&](Candidate c) {
    if (!best || c.better_than(*best)) best = std::move(c);
  };

  std::priority_queue<PartialPath, std::vector<PartialPath>, PathOrder> frontier;
  frontier.push(PartialPath{{claimer}, {}});
  std::set<std::string> settled;

  while (!frontier.empty()) {
    PartialPath path = frontier.top();
    frontier.pop();
    if (best && !(path.ids.size() < best->length ||
                  (path.ids.size() == best->length && path.ids < best->ids)))
      break;
    const std::string& tail = path.ids.back();
    if (settled.count(tail)) continue;
    settled.insert(tail);

    auto hops_of = [&] {
      std::vector<ChainLink> links;
      for (std::size_t i = 0; i + 1 < path.ids.size(); ++i)
        links.push_back({path.ids[i], path.hop_tags[i]});
      return links;
    };

    // Terminal: a fact at the path's tail. At the query's own node any stored
    // fact answers; further along the chain only direct facts do.
    bool fact_here = path.ids.size() == 1 ? stored_fact_at(tail) : direct_fact_at(tail);
    if (fact_here) {
      std::vector<ChainLink> links = hops_of();
      links.push_back({tail, RuleTag::Fact});
      offer(Candidate{path.ids.size(), path.ids, DerivationChain{std::move(links), tail}});
    }

    // Terminal: a D2 assertion at the tail, completed by the lexicographically
    // least direct attester whose claim the delegator endorses.
    {
      std::optional<std::pair<std::string, std::string>> d2_pick;  // (attester, delegator)
      for (const DelegationAssertion& d : delegations_) {
        if (d.kind != DelegationKind::D2 || d.delegatee != tail || !(d.prop == prop)) continue;
        for (const auto& [id, a] : authorities_) {
          if (!direct_fact_at(id) || !direct_endorsement_at(d.delegator, id)) continue;
          std::pair<std::string, std::string> entry{id, d.delegator};
          if (!d2_pick || entry < *d2_pick) d2_pick = entry;
        }
      }
      if (d2_pick) {
        std::vector<ChainLink> links = hops_of();
        links.push_back({tail, RuleTag::D2});
        links.push_back({d2_pick->first, RuleTag::Fact});
        std::vector<std::string> ids = path.ids;
        ids.push_back(d2_pick->first);
        offer(Candidate{ids.size(), ids, DerivationChain{std::move(links), d2_pick->second}});
      }
    }

    // Expand D1/Dinf edges, preferring the D1 tag when both exist.
    std::map<std::string, RuleTag> neighbors;
    for (const DelegationAssertion& d : delegations_) {
      if (d.delegatee != tail || !(d.prop == prop)) continue;
      if (d.kind == DelegationKind::D1)
        neighbors[d.delegator] = RuleTag::D1;
      else if (d.kind == DelegationKind::Dinf)
        neighbors.emplace(d.delegator, RuleTag::Dinf);
    }
    for (const auto& [next_id, tag] : neighbors) {
      if (settled.count(next_id)) continue;
      PartialPath extended = path;
      extended.ids.push_back(next_id);
      extended.hop_tags.push_back(tag);
      frontier.push(std::move(extended));
    }
  }

  if (!best) return DerivationResult{DerivationResult::Status::NotDerivable, {}};
  if (best->chain.links.size() > config_.max_chain_depth)
    return DerivationResult{DerivationResult::Status::DepthLimitExceeded, {}};
  return DerivationResult{DerivationResult::Status::Holds, std::move(best->chain)};
}

DerivationResult KnowledgeBase::holds(const std::string& claimer, Access access,
                                      const TimeQualifier& when, const Formula& prop) const {
  require_authority(claimer);
  if (access == Access::Direct) {
    for (const Attestation& f : facts_) {
      if (f.claimer == claimer && f.access == Access::Direct && f.prop == prop &&
          qualifier_satisfies(f.when, when)) {
        return DerivationResult{DerivationResult::Status::Holds,
                                DerivationChain{{{claimer, RuleTag::Fact}}, claimer}};
      }
    }
    return DerivationResult{DerivationResult::Status::NotDerivable, {}};
  }
  return search_indirect(claimer, prop, when);
}

DerivationResult KnowledgeBase::derive_indirect(const std::string& claimer,
                                                const Formula& prop) const {
  require_authority(claimer);
  return search_indirect(claimer, prop, TimeQualifier::untimed());
}

std::optional<std::string> KnowledgeBase::accountable_for(const std::string& claimer,
                                                          const Formula& prop) const {
  DerivationResult r = derive_indirect(claimer, prop);
  if (!r.holds()) return std::nullopt;
  return r.chain->accountable;
}

}  // namespace cyberlogic
