#include <doctest.h>

#include "cyberlogic/ledger.hpp"
#include "support/generators.hpp"

using namespace cyberlogic;
using testsupport::make_rng;
using testsupport::pick;

namespace {

Visa tiny_visa() {
  return Visa{"v", "c", 5, Formula::atom("visa"), "X", kZeroDigest};
}

Ledger sample_ledger(std::size_t deliveries) {
  Ledger ledger;
  for (std::size_t i = 0; i < deliveries; ++i) {
    Visa v = tiny_visa();
    v.id = "v" + std::to_string(i);
    ledger = write(ledger, "c", DeliverTx{v}, Time(i));
  }
  return ledger;
}

}  // namespace

TEST_CASE("pinned hash vectors") {
  // Known-answer check of the digest primitive.
  CHECK(to_hex(sha256("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  // One full entry hash, frozen from an independent reimplementation of the
  // canonical encoding.
  Ledger ledger = write(Ledger(), "alice", DeliverTx{tiny_visa()}, 7);
  CHECK(to_hex(ledger.entries()[0].hash) ==
        "7a1be5e875e755bc4dc0393c0d8fbc4887f074e50ffaa4229a8a2b0d3ccb526b");
}

TEST_CASE("genesis entry links to the zero digest") {
  Ledger ledger = write(Ledger(), "a", DeliverTx{tiny_visa()}, 0);
  REQUIRE(ledger.size() == 1);
  CHECK(ledger.entries()[0].index == 0);
  CHECK(ledger.entries()[0].prev_hash == kZeroDigest);
}

TEST_CASE("every entry links to its predecessor and earlier entries stay identical") {
  Ledger three = sample_ledger(3);
  std::string before = save_ledger(three);
  std::size_t header = ledger_entry_offsets(three)[0];
  Ledger four = write(three, "a", DeliverTx{tiny_visa()}, 10);
  CHECK(four.size() == 4);
  CHECK(four.entries()[3].prev_hash == four.entries()[2].hash);
  // append-only: the serialized prefix of the first three entries is bit-identical
  CHECK(save_ledger(four).substr(header, before.size() - header) == before.substr(header));
  CHECK(three.size() == 3);  // value semantics: the old ledger is untouched
}

TEST_CASE("the clock never runs backwards") {
  Ledger ledger = write(Ledger(), "a", DeliverTx{tiny_visa()}, 5);
  CHECK_THROWS_AS(write(ledger, "a", DeliverTx{tiny_visa()}, 4), EngineError);
  CHECK_NOTHROW(write(ledger, "a", DeliverTx{tiny_visa()}, 5));  // equal timestamps are fine
}

TEST_CASE("read: selectors") {
  CHECK(read(Ledger(), "r", TransactionSelector::all(), 0).entries.empty());

  Ledger ledger = sample_ledger(3);
  Visa v1 = tiny_visa();
  v1.id = "v1";
  ReadResult r = read(ledger, "r", TransactionSelector::deliver_of(v1), 5);
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].index == 1);
  CHECK(r.ledger.size() == ledger.size());  // plain reads do not write

  SUBCASE("a control read records the control") {
    ReadResult c = read(ledger, "officer", TransactionSelector::control_of(v1), 5);
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries[0].index == 1);
    CHECK(c.ledger.size() == ledger.size() + 1);
    CHECK(transaction_kind(c.ledger.entries().back().tx) == "control");
    CHECK(c.ledger.entries().back().author == "officer");
  }

  SUBCASE("the literal reading keeps controls off the ledger") {
    ReadResult c = read(ledger, "officer", TransactionSelector::control_of(v1), 5, false);
    CHECK(c.ledger.size() == ledger.size());
  }
}

TEST_CASE("audit: fresh chains are ok, including the empty one") {
  CHECK(audit_chain(Ledger()).ok);
  CHECK(audit_chain(sample_ledger(10)).ok);
}

TEST_CASE("audit flags a tampered entry at its index") {
  Ledger ledger = sample_ledger(10);
  std::vector<LedgerEntry> entries = ledger.entries();
  std::get<DeliverTx>(entries[4].tx).visa.duration ^= 1;
  AuditReport report = audit_chain(Ledger::from_entries(entries));
  CHECK_FALSE(report.ok);
  CHECK(report.first_bad_index == 4);
}

TEST_CASE("persistence round-trips bit-exactly") {
  Ledger ledger = sample_ledger(5);
  std::string bytes = save_ledger(ledger);
  LoadResult loaded = load_ledger(bytes);
  REQUIRE(loaded.ledger.has_value());
  CHECK(save_ledger(*loaded.ledger) == bytes);
  CHECK(audit_chain(*loaded.ledger).ok);
}

TEST_CASE("single byte flips in the file are caught at or before the flipped entry") {
  Ledger ledger = sample_ledger(8);
  std::string bytes = save_ledger(ledger);
  std::vector<std::size_t> offsets = ledger_entry_offsets(ledger);
  REQUIRE(offsets.size() == 8);

  auto entry_of_offset = [&](std::size_t pos) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < offsets.size(); ++i)
      if (pos >= offsets[i]) idx = i;
    return idx;
  };

  auto rng = make_rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t pos = offsets[0] + pick(rng, bytes.size() - offsets[0]);
    std::string mutated = bytes;
    mutated[pos] = static_cast<char>(mutated[pos] ^ (1 << pick(rng, 8)));
    if (mutated == bytes) continue;

    LoadResult loaded = load_ledger(mutated);
    std::size_t broken_at;
    if (!loaded.ledger) {
      broken_at = *loaded.bad_entry;
    } else {
      AuditReport report = audit_chain(*loaded.ledger);
      REQUIRE_FALSE(report.ok);
      broken_at = *report.first_bad_index;
    }
    CAPTURE(pos);
    CHECK(broken_at <= entry_of_offset(pos));
  }
}

TEST_CASE("a corrupted header is rejected as unreadable") {
  std::string bytes = save_ledger(sample_ledger(2));
  bytes[0] = 'X';
  CHECK_THROWS_AS(load_ledger(bytes), EngineError);
}

TEST_CASE("verify needs queries and a delivered visa") {
  KnowledgeBase kb = KnowledgeBase::create();
  Ledger ledger = sample_ledger(1);
  Visa v0 = tiny_visa();
  v0.id = "v0";
  CHECK_THROWS_AS(verify(ledger, "who", v0, {}, kb), EngineError);

  Query always;
  always.name = "always";
  always.eval = [](const QueryContext&) { return QueryOutcome{true, {}}; };
  // v0 was delivered but its demand reference dangles
  CHECK_THROWS_AS(verify(ledger, "who", v0, {always}, kb), EngineError);
  // and an undelivered visa is unknown entirely
  Visa ghost = tiny_visa();
  ghost.id = "ghost";
  CHECK_THROWS_AS(verify(ledger, "who", ghost, {always}, kb), EngineError);
}

TEST_CASE("verify is pure and aggregates suspects in query order") {
  KnowledgeBase kb = KnowledgeBase::create().with_authority({"W", "W"});
  SchengenDemand d;
  d.id = "d";
  d.form = {"f", 1, 2, "W", "X", ""};
  d.picture = {"pic", ""};
  d.pass = {"pp", "W", 100, {}, "W"};
  d.insurance = {"ins", "W", "W", ""};
  d.sufficient = {SufficientMeans::Kind::Employment, "W", 0, Formula::atom("J")};
  d.time_stamp = 0;

  Ledger ledger = write(Ledger(), "W", DemandTx{d}, 0);
  Visa v = tiny_visa();
  v.demand_ref = ledger.entries()[0].hash;
  ledger = write(ledger, "c", DeliverTx{v}, 1);

  Attestation claim_a{"W", Access::Direct, TimeQualifier::untimed(), Formula::atom("a"), {}};
  Attestation claim_b{"W", Access::Direct, TimeQualifier::untimed(), Formula::atom("b"), {}};
  Query fail_a{"fail_a", {}, [&](const QueryContext&) {
                 return QueryOutcome{false, {claim_a}};
               }};
  Query fail_b{"fail_b", {}, [&](const QueryContext&) {
                 return QueryOutcome{false, {claim_b}};
               }};
  Query ok{"ok", {}, [](const QueryContext&) { return QueryOutcome{true, {}}; }};

  Answer a1 = verify(ledger, "who", v, {fail_a, ok, fail_b}, kb);
  Answer a2 = verify(ledger, "who", v, {fail_a, ok, fail_b}, kb);
  CHECK_FALSE(a1.valid);
  REQUIRE(a1.suspects.size() == 2);
  CHECK(a1.suspects[0].prop == Formula::atom("a"));
  CHECK(a1.suspects[1].prop == Formula::atom("b"));
  CHECK(a1.valid == a2.valid);
  CHECK(a1.suspects.size() == a2.suspects.size());

  Answer all_good = verify(ledger, "who", v, {ok, ok}, kb);
  CHECK(all_good.valid);
  CHECK(all_good.suspects.empty());
}
