#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyberlogic/formula.hpp"

namespace cyberlogic {

struct SyntaxError : std::runtime_error {
  SyntaxError(std::size_t offset, std::vector<std::string> expected);
  std::size_t offset;                 // byte index of the first invalid position
  std::vector<std::string> expected;  // token classes that would have been valid
};

// Parses the textual attestation notation:
//   k |> f     k *|> f      direct / indirect
//   k |>=t f   k *|>=t f    at tick t
//   k |><t f   k *|><t f    before tick t
//   k |>>t f   k *|>>t f    after tick t
// with connectives /\ (conjunction), -> (implication, right associative),
// ~ (negation), parentheses, identifiers, predicate application
// pred(arg1,arg2) and decimal time literals. Attestation binds tighter than
// /\ and /\ tighter than ->.
Formula parse_formula(const std::string& text);

// Canonical form: single spaces around operators, time glued to its operator
// (k |>=3 f), no space after argument commas, minimal parentheses.
// parse_formula(print_formula(f)) == f for every formula.
std::string print_formula(const Formula& f);

}  // namespace cyberlogic
