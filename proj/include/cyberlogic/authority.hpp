#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace cyberlogic {

// Abstract clock ticks. One tick is a day in the bundled fixtures; nothing
// in the engine depends on the unit.
using Time = std::uint64_t;

inline Time months(Time n) { return 30 * n; }

// A principal that can claim propositions and bear accountability for them.
// Identity is the id token; display_name is presentation only.
struct Authority {
  std::string id;
  std::string display_name;

  friend bool operator==(const Authority& a, const Authority& b) { return a.id == b.id; }
};

// Id of the distinguished time authority present in every knowledge base.
inline const std::string kTimeAuthorityId = "Kt";

enum class Access { Direct, Indirect };

// Optional temporal qualification of a claim: at, before or after a tick.
class TimeQualifier {
 public:
  enum class Kind { Untimed, At, Before, After };

  TimeQualifier() = default;

  static TimeQualifier untimed() { return TimeQualifier(); }
  static TimeQualifier at(Time t) { return TimeQualifier(Kind::At, t); }
  static TimeQualifier before(Time t) { return TimeQualifier(Kind::Before, t); }
  static TimeQualifier after(Time t) { return TimeQualifier(Kind::After, t); }

  Kind kind() const { return kind_; }
  Time time() const { return time_; }

  friend bool operator==(const TimeQualifier&, const TimeQualifier&) = default;

 private:
  TimeQualifier(Kind k, Time t) : kind_(k), time_(t) {}

  Kind kind_ = Kind::Untimed;
  Time time_ = 0;  // unused when untimed
};

// Entailment between a stored fact's qualifier and a queried one.
// An At(t) fact answers At(t), Before(t') when t < t', After(t') when t > t'.
// Untimed facts answer only untimed queries; untimed queries accept any fact.
// Before/After facts answer only weaker claims of the same direction.
bool qualifier_satisfies(const TimeQualifier& fact, const TimeQualifier& query);

}  // namespace cyberlogic
