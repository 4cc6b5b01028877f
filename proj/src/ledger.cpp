#include "cyberlogic/ledger.hpp"

#include <fstream>

#include "cyberlogic/errors.hpp"

namespace cyberlogic {

namespace {

constexpr char kMagic[] = "CYBL1";
constexpr std::size_t kMagicLen = 5;

enum TxTag : std::uint8_t { kDemandTag = 0, kDeliverTag = 1, kControlTag = 2 };

}  // namespace

std::string transaction_kind(const Transaction& tx) {
  if (std::holds_alternative<DemandTx>(tx)) return "demand";
  if (std::holds_alternative<DeliverTx>(tx)) return "deliver";
  return "control";
}

void encode(Encoder& e, const Transaction& tx) {
  if (const auto* d = std::get_if<DemandTx>(&tx)) {
    e.u8(kDemandTag);
    encode(e, d->demand);
  } else if (const auto* v = std::get_if<DeliverTx>(&tx)) {
    e.u8(kDeliverTag);
    encode(e, v->visa);
  } else {
    e.u8(kControlTag);
    encode(e, std::get<ControlTx>(tx).visa);
  }
}

Transaction decode_transaction(Decoder& d) {
  switch (d.u8()) {
    case kDemandTag: return DemandTx{decode_demand(d)};
    case kDeliverTag: return DeliverTx{decode_visa(d)};
    case kControlTag: return ControlTx{decode_visa(d)};
    default: throw DecodeError("bad transaction tag");
  }
}

Ledger Ledger::from_entries(std::vector<LedgerEntry> entries) {
  Ledger ledger;
  ledger.entries_ = std::move(entries);
  return ledger;
}

Digest entry_hash(const LedgerEntry& entry) {
  Encoder tx_enc;
  encode(tx_enc, entry.tx);
  Encoder e;
  e.u64(entry.index);
  e.str(entry.author);
  e.str(tx_enc.bytes());
  e.u64(entry.timestamp);
  e.digest(entry.prev_hash);
  return sha256(e.bytes());
}

Ledger write(const Ledger& ledger, const std::string& author, Transaction tx, Time t) {
  if (!ledger.empty() && t < ledger.entries().back().timestamp)
    throw EngineError(ErrorCode::ClockRegression,
                      std::to_string(t) + " precedes the last entry");
  LedgerEntry entry;
  entry.index = ledger.size();
  entry.author = author;
  entry.tx = std::move(tx);
  entry.timestamp = t;
  entry.prev_hash = ledger.empty() ? kZeroDigest : ledger.entries().back().hash;
  entry.hash = entry_hash(entry);
  Ledger next = ledger;
  next.entries_.push_back(std::move(entry));
  return next;
}

namespace {

const Visa* visa_of(const Transaction& tx) {
  if (const auto* d = std::get_if<DeliverTx>(&tx)) return &d->visa;
  if (const auto* c = std::get_if<ControlTx>(&tx)) return &c->visa;
  return nullptr;
}

bool matches(const LedgerEntry& entry, const TransactionSelector& s) {
  using K = TransactionSelector::Kind;
  switch (s.kind) {
    case K::All:
      return true;
    case K::Demands:
      return std::holds_alternative<DemandTx>(entry.tx);
    case K::Delivers:
      return std::holds_alternative<DeliverTx>(entry.tx);
    case K::Controls:
      return std::holds_alternative<ControlTx>(entry.tx);
    case K::DeliverOfVisa:
    case K::ControlOfVisa:
      return std::holds_alternative<DeliverTx>(entry.tx) &&
             std::get<DeliverTx>(entry.tx).visa == *s.visa;
    case K::DemandByDigest:
      return std::holds_alternative<DemandTx>(entry.tx) && entry.hash == *s.digest;
  }
  return false;
}

}  // namespace

ReadResult read(const Ledger& ledger, const std::string& reader,
                const TransactionSelector& selector, Time t, bool record_control) {
  ReadResult result;
  for (const LedgerEntry& entry : ledger.entries()) {
    if (matches(entry, selector)) result.entries.push_back(entry);
  }
  result.ledger = ledger;
  if (selector.kind == TransactionSelector::Kind::ControlOfVisa && record_control)
    result.ledger = write(ledger, reader, ControlTx{*selector.visa}, t);
  return result;
}

std::optional<LedgerEntry> find_deliver_entry(const Ledger& ledger, const Visa& v) {
  for (const LedgerEntry& entry : ledger.entries()) {
    const Visa* ev = visa_of(entry.tx);
    if (std::holds_alternative<DeliverTx>(entry.tx) && ev && *ev == v) return entry;
  }
  return std::nullopt;
}

std::optional<SchengenDemand> find_demand_by_digest(const Ledger& ledger, const Digest& ref) {
  for (const LedgerEntry& entry : ledger.entries()) {
    if (entry.hash == ref && std::holds_alternative<DemandTx>(entry.tx))
      return std::get<DemandTx>(entry.tx).demand;
  }
  return std::nullopt;
}

Answer verify(const Ledger& ledger, const std::string& verifier, const Visa& v,
              const std::vector<Query>& qs, const KnowledgeBase& kb) {
  (void)verifier;  // verification does not depend on who asks
  if (qs.empty()) throw EngineError(ErrorCode::EmptyQueryList, "verify needs at least one query");
  if (!find_deliver_entry(ledger, v))
    throw EngineError(ErrorCode::UnknownVisa, "no deliver entry for " + v.id);
  std::optional<SchengenDemand> demand = find_demand_by_digest(ledger, v.demand_ref);
  if (!demand)
    throw EngineError(ErrorCode::UnknownVisa, "dangling demand reference of " + v.id);

  QueryContext ctx{ledger, v, *demand, kb};
  Answer answer;
  for (const Query& q : qs) {
    QueryOutcome outcome = q.eval(ctx);
    if (!outcome.satisfied) {
      answer.valid = false;
      answer.suspects.insert(answer.suspects.end(), outcome.suspects.begin(),
                             outcome.suspects.end());
    }
  }
  return answer;
}

AuditReport audit_chain(const Ledger& ledger) {
  Digest prev = kZeroDigest;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const LedgerEntry& entry = ledger.entries()[i];
    if (entry.index != i || entry.prev_hash != prev || entry_hash(entry) != entry.hash)
      return AuditReport::broken(i);
    prev = entry.hash;
  }
  return AuditReport::good();
}

namespace {

void encode_entry(Encoder& e, const LedgerEntry& entry) {
  e.u64(entry.index);
  e.str(entry.author);
  Encoder tx_enc;
  encode(tx_enc, entry.tx);
  e.str(tx_enc.bytes());
  e.u64(entry.timestamp);
  e.digest(entry.prev_hash);
  e.digest(entry.hash);
}

LedgerEntry decode_entry(Decoder& d) {
  LedgerEntry entry;
  entry.index = d.u64();
  entry.author = d.str();
  std::string tx_bytes = d.str();
  Decoder tx_dec(tx_bytes);
  entry.tx = decode_transaction(tx_dec);
  if (!tx_dec.done()) throw DecodeError("trailing bytes after transaction");
  entry.timestamp = d.u64();
  entry.prev_hash = d.digest();
  entry.hash = d.digest();
  return entry;
}

}  // namespace

std::string save_ledger(const Ledger& ledger) {
  Encoder e;
  e.raw(std::string_view(kMagic, kMagicLen));
  e.str(kHashAlgorithm);
  e.u64(ledger.size());
  for (const LedgerEntry& entry : ledger.entries()) encode_entry(e, entry);
  return e.take();
}

std::vector<std::size_t> ledger_entry_offsets(const Ledger& ledger) {
  Encoder header;
  header.raw(std::string_view(kMagic, kMagicLen));
  header.str(kHashAlgorithm);
  header.u64(ledger.size());
  std::vector<std::size_t> offsets;
  std::size_t pos = header.bytes().size();
  for (const LedgerEntry& entry : ledger.entries()) {
    offsets.push_back(pos);
    Encoder e;
    encode_entry(e, entry);
    pos += e.bytes().size();
  }
  return offsets;
}

LoadResult load_ledger(std::string_view bytes) {
  Decoder d(bytes);
  std::uint64_t count = 0;
  try {
    if (d.raw(kMagicLen) != std::string(kMagic, kMagicLen))
      throw EngineError(ErrorCode::BadLedgerFile, "bad magic");
    if (d.str() != kHashAlgorithm)
      throw EngineError(ErrorCode::BadLedgerFile, "unsupported hash algorithm");
    count = d.u64();
  } catch (const DecodeError& err) {
    throw EngineError(ErrorCode::BadLedgerFile, err.what());
  }

  std::vector<LedgerEntry> entries;
  for (std::uint64_t i = 0; i < count; ++i) {
    try {
      entries.push_back(decode_entry(d));
    } catch (const DecodeError& err) {
      return LoadResult{std::nullopt, static_cast<std::size_t>(i), err.what()};
    }
  }
  if (!d.done())
    return LoadResult{std::nullopt, count ? static_cast<std::size_t>(count - 1) : 0,
                      "trailing bytes"};
  return LoadResult{Ledger::from_entries(std::move(entries)), std::nullopt, ""};
}

void save_ledger_file(const Ledger& ledger, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EngineError(ErrorCode::BadLedgerFile, "cannot open " + path);
  std::string bytes = save_ledger(ledger);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw EngineError(ErrorCode::BadLedgerFile, "cannot write " + path);
}

LoadResult load_ledger_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EngineError(ErrorCode::BadLedgerFile, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ledger(bytes);
}

}  // namespace cyberlogic
