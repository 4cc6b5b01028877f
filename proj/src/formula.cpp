#include "cyberlogic/formula.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

namespace cyberlogic {

struct Formula::Node {
  Kind kind;
  std::string text;  // atom head or attest claimer
  Time time = 0;
  Access access = Access::Direct;
  TimeQualifier when;
  std::vector<Formula> children;
};

Formula Formula::atom(std::string head, std::vector<Formula> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->text = std::move(head);
  n->children = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::time_lit(Time t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::TimeLit;
  n->time = t;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children = {std::move(f)};
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::attest(std::string claimer, Access access, TimeQualifier when, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Attest;
  n->text = std::move(claimer);
  n->access = access;
  n->when = when;
  n->children = {std::move(body)};
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::head() const {
  assert(node_->kind == Kind::Atom);
  return node_->text;
}

const std::vector<Formula>& Formula::args() const {
  assert(node_->kind == Kind::Atom);
  return node_->children;
}

Time Formula::time_value() const {
  assert(node_->kind == Kind::TimeLit);
  return node_->time;
}

const Formula& Formula::child() const {
  assert(node_->kind == Kind::Not || node_->kind == Kind::Attest);
  return node_->children[0];
}

const Formula& Formula::lhs() const {
  assert(node_->kind == Kind::And || node_->kind == Kind::Implies);
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  assert(node_->kind == Kind::And || node_->kind == Kind::Implies);
  return node_->children[1];
}

const std::string& Formula::claimer() const {
  assert(node_->kind == Kind::Attest);
  return node_->text;
}

Access Formula::access() const {
  assert(node_->kind == Kind::Attest);
  return node_->access;
}

const TimeQualifier& Formula::when() const {
  assert(node_->kind == Kind::Attest);
  return node_->when;
}

std::size_t Formula::attest_depth() const {
  std::size_t deepest = 0;
  for (const Formula& c : node_->children) {
    deepest = std::max(deepest, c.attest_depth());
  }
  return deepest + (node_->kind == Kind::Attest ? 1 : 0);
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::TimeLit:
      return a.time == b.time;
    case Kind::Attest:
      if (a.text != b.text || a.access != b.access || !(a.when == b.when)) return false;
      break;
    case Kind::Atom:
      if (a.text != b.text) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(a.children[i] == b.children[i])) return false;
  }
  return true;
}

Formula endorsement(const std::string& attester_id, const Formula& body) {
  return Formula::atom("endorsement", {Formula::atom(attester_id), body});
}

bool is_endorsement_of(const Formula& f, const std::string& attester_id, const Formula& body) {
  return f == endorsement(attester_id, body);
}

Formula hasbeen(Time t) { return Formula::atom("hasbeen", {Formula::time_lit(t)}); }

}  // namespace cyberlogic
