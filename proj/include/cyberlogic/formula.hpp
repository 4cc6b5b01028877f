#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cyberlogic/authority.hpp"

namespace cyberlogic {

// Immutable formula tree. Atoms with arguments carry propositions
// (e.g. travel_valid(JSoutward)); attestation nodes embed claims by an
// authority so that propositions may themselves speak about claims.
class Formula {
 public:
  enum class Kind { Atom, TimeLit, Not, And, Implies, Attest };

  Formula() : Formula(atom("true")) {}

  static Formula atom(std::string head, std::vector<Formula> args = {});
  static Formula time_lit(Time t);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula attest(std::string claimer, Access access, TimeQualifier when, Formula body);

  Kind kind() const;

  // Atom
  const std::string& head() const;
  const std::vector<Formula>& args() const;

  // TimeLit
  Time time_value() const;

  // Not / Attest body
  const Formula& child() const;

  // And / Implies
  const Formula& lhs() const;
  const Formula& rhs() const;

  // Attest
  const std::string& claimer() const;
  Access access() const;
  const TimeQualifier& when() const;

  // Deepest count of Attest nodes along any path, the nesting the KB limits.
  std::size_t attest_depth() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// The reified endorsement proposition used by D2 delegation: it stands for
// "attester's direct claim of body implies body" and is matched syntactically.
Formula endorsement(const std::string& attester_id, const Formula& body);
bool is_endorsement_of(const Formula& f, const std::string& attester_id, const Formula& body);

// The time authority's record that tick t has been observed.
Formula hasbeen(Time t);

}  // namespace cyberlogic
