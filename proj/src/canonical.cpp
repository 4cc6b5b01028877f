#include "cyberlogic/canonical.hpp"

namespace cyberlogic {

namespace {

enum FormulaTag : std::uint8_t {
  kAtom = 0,
  kTimeLit = 1,
  kNot = 2,
  kAnd = 3,
  kImplies = 4,
  kAttest = 5,
};

std::uint8_t qualifier_tag(const TimeQualifier& q) {
  switch (q.kind()) {
    case TimeQualifier::Kind::Untimed: return 0;
    case TimeQualifier::Kind::At: return 1;
    case TimeQualifier::Kind::Before: return 2;
    case TimeQualifier::Kind::After: return 3;
  }
  return 0;
}

TimeQualifier qualifier_from(std::uint8_t tag, Time t) {
  switch (tag) {
    case 0: return TimeQualifier::untimed();
    case 1: return TimeQualifier::at(t);
    case 2: return TimeQualifier::before(t);
    case 3: return TimeQualifier::after(t);
    default: throw DecodeError("bad time qualifier tag");
  }
}

}  // namespace

void Encoder::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out_.push_back(static_cast<char>((v >> shift) & 0xff));
}

void Encoder::str(std::string_view s) {
  u64(s.size());
  out_.append(s);
}

void Encoder::digest(const Digest& d) {
  out_.append(reinterpret_cast<const char*>(d.data()), d.size());
}

void Encoder::formula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      u8(kAtom);
      str(f.head());
      u64(f.args().size());
      for (const Formula& a : f.args()) formula(a);
      break;
    case Formula::Kind::TimeLit:
      u8(kTimeLit);
      u64(f.time_value());
      break;
    case Formula::Kind::Not:
      u8(kNot);
      formula(f.child());
      break;
    case Formula::Kind::And:
      u8(kAnd);
      formula(f.lhs());
      formula(f.rhs());
      break;
    case Formula::Kind::Implies:
      u8(kImplies);
      formula(f.lhs());
      formula(f.rhs());
      break;
    case Formula::Kind::Attest:
      u8(kAttest);
      str(f.claimer());
      u8(f.access() == Access::Indirect ? 1 : 0);
      u8(qualifier_tag(f.when()));
      u64(f.when().kind() == TimeQualifier::Kind::Untimed ? 0 : f.when().time());
      formula(f.child());
      break;
  }
}

void Decoder::need(std::size_t n) const {
  if (pos_ + n > bytes_.size()) throw DecodeError("truncated input");
}

std::uint8_t Decoder::u8() {
  need(1);
  return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint64_t Decoder::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
  return v;
}

std::string Decoder::str() {
  std::uint64_t n = u64();
  if (n > bytes_.size() - pos_) throw DecodeError("string length out of range");
  std::string s(bytes_.substr(pos_, n));
  pos_ += n;
  return s;
}

std::string Decoder::raw(std::size_t n) {
  need(n);
  std::string s(bytes_.substr(pos_, n));
  pos_ += n;
  return s;
}

Digest Decoder::digest() {
  need(32);
  Digest d{};
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = static_cast<std::uint8_t>(bytes_[pos_ + i]);
  pos_ += d.size();
  return d;
}

Formula Decoder::formula() {
  std::uint8_t tag = u8();
  switch (tag) {
    case kAtom: {
      std::string head = str();
      std::uint64_t argc = u64();
      if (argc > bytes_.size()) throw DecodeError("argument count out of range");
      std::vector<Formula> args;
      args.reserve(argc);
      for (std::uint64_t i = 0; i < argc; ++i) args.push_back(formula());
      return Formula::atom(std::move(head), std::move(args));
    }
    case kTimeLit:
      return Formula::time_lit(u64());
    case kNot:
      return Formula::negation(formula());
    case kAnd: {
      Formula l = formula();
      return Formula::conjunction(std::move(l), formula());
    }
    case kImplies: {
      Formula l = formula();
      return Formula::implication(std::move(l), formula());
    }
    case kAttest: {
      std::string claimer = str();
      Access access = u8() ? Access::Indirect : Access::Direct;
      std::uint8_t qtag = u8();
      Time t = u64();
      Formula body = formula();
      return Formula::attest(std::move(claimer), access, qualifier_from(qtag, t),
                             std::move(body));
    }
    default:
      throw DecodeError("bad formula tag");
  }
}

}  // namespace cyberlogic
