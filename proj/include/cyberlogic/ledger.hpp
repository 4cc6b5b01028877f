#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cyberlogic/hash.hpp"
#include "cyberlogic/knowledge_base.hpp"
#include "cyberlogic/schengen.hpp"

namespace cyberlogic {

struct DemandTx {
  SchengenDemand demand;
};
struct DeliverTx {
  Visa visa;
};
struct ControlTx {
  Visa visa;
};

using Transaction = std::variant<DemandTx, DeliverTx, ControlTx>;

std::string transaction_kind(const Transaction& tx);
void encode(Encoder& e, const Transaction& tx);
Transaction decode_transaction(Decoder& d);

struct LedgerEntry {
  std::uint64_t index = 0;
  std::string author;
  Transaction tx;
  Time timestamp = 0;
  Digest prev_hash = kZeroDigest;
  Digest hash = kZeroDigest;
};

// hash = H(index || author || canonical tx || timestamp || prev_hash)
Digest entry_hash(const LedgerEntry& entry);

// Append-only hash-chained transaction log. Values are immutable; append
// returns a new value. Single writer, any number of concurrent readers.
class Ledger {
 public:
  Ledger() = default;

  // Verbatim reconstruction, used by reload; chain validity is not checked
  // here so audit can inspect what was actually stored.
  static Ledger from_entries(std::vector<LedgerEntry> entries);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  friend Ledger write(const Ledger& ledger, const std::string& author, Transaction tx, Time t);

 private:
  std::vector<LedgerEntry> entries_;
};

// Appends one entry; throws ClockRegression when t precedes the last entry.
Ledger write(const Ledger& ledger, const std::string& author, Transaction tx, Time t);

struct TransactionSelector {
  enum class Kind {
    All,
    Demands,
    Delivers,
    Controls,
    DeliverOfVisa,   // Deliver entries carrying exactly this visa
    DemandByDigest,  // the Demand entry with this entry hash
    ControlOfVisa,   // like DeliverOfVisa, and records the control itself
  };
  Kind kind = Kind::All;
  std::optional<Visa> visa;
  std::optional<Digest> digest;

  static TransactionSelector all() { return {}; }
  static TransactionSelector demands() { return {Kind::Demands, {}, {}}; }
  static TransactionSelector delivers() { return {Kind::Delivers, {}, {}}; }
  static TransactionSelector controls() { return {Kind::Controls, {}, {}}; }
  static TransactionSelector deliver_of(Visa v) { return {Kind::DeliverOfVisa, std::move(v), {}}; }
  static TransactionSelector demand_by(Digest d) { return {Kind::DemandByDigest, {}, d}; }
  static TransactionSelector control_of(Visa v) { return {Kind::ControlOfVisa, std::move(v), {}}; }
};

struct ReadResult {
  std::vector<LedgerEntry> entries;
  Ledger ledger;  // extended by a Control entry for ControlOfVisa reads
};

// Returns matching entries in ledger order. A ControlOfVisa selector also
// appends the Control transaction when record_control is set, so the audit
// trail shows that the control took place.
ReadResult read(const Ledger& ledger, const std::string& reader,
                const TransactionSelector& selector, Time t, bool record_control = true);

// Everything a query may inspect: the ledger, the visa under suspicion, its
// originating demand and the ambient attestations.
struct QueryContext {
  const Ledger& ledger;
  const Visa& visa;
  const SchengenDemand& demand;
  const KnowledgeBase& kb;
};

struct QueryOutcome {
  bool satisfied = false;
  std::vector<Attestation> suspects;  // non-empty when not satisfied
};

// A named predicate over a visa; the evaluator is attached by whoever builds
// the query (see protocol.hpp for the built-in ones).
struct Query {
  std::string name;
  std::vector<std::string> params;
  std::function<QueryOutcome(const QueryContext&)> eval;
};

struct Answer {
  bool valid = true;
  std::vector<Attestation> suspects;  // non-empty iff !valid, in query order
};

// Evaluates every query; Valid iff all hold, otherwise the suspicious claims
// whose accountable authorities must be re-checked. Pure in all arguments.
// Throws EmptyQueryList on no queries and UnknownVisa when the ledger has no
// Deliver entry for v or its demand reference dangles.
Answer verify(const Ledger& ledger, const std::string& verifier, const Visa& v,
              const std::vector<Query>& qs, const KnowledgeBase& kb);

// Resolution helpers shared by the protocol layer.
std::optional<LedgerEntry> find_deliver_entry(const Ledger& ledger, const Visa& v);
std::optional<SchengenDemand> find_demand_by_digest(const Ledger& ledger, const Digest& ref);

struct AuditReport {
  bool ok = true;
  std::optional<std::size_t> first_bad_index;

  static AuditReport good() { return {}; }
  static AuditReport broken(std::size_t i) { return {false, i}; }
};

// Ok iff every hash and prev_hash link verifies; otherwise the first index
// in violation.
AuditReport audit_chain(const Ledger& ledger);

// Persistence: magic "CYBL1", hash algorithm id, entry count, canonical
// entries. Reloads bit-exactly.
std::string save_ledger(const Ledger& ledger);
void save_ledger_file(const Ledger& ledger, const std::string& path);

struct LoadResult {
  std::optional<Ledger> ledger;
  std::optional<std::size_t> bad_entry;  // entry index where decoding failed
  std::string error;
};

// Structural decode only; chain validity is audit_chain's job. A payload
// that fails to decode at entry i yields bad_entry = i.
// Throws BadLedgerFile when the header itself is unreadable.
LoadResult load_ledger(std::string_view bytes);
LoadResult load_ledger_file(const std::string& path);

// Offset of entry i in the serialized form; the tamper tests map mutated
// bytes back to entries with this.
std::vector<std::size_t> ledger_entry_offsets(const Ledger& ledger);

}  // namespace cyberlogic
