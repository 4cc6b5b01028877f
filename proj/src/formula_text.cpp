#include "cyberlogic/formula_text.hpp"

#include <cctype>
#include <charconv>
#include <cstring>
#include <sstream>
#include <utility>

namespace cyberlogic {

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  return os.str();
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset_, std::vector<std::string> expected_)
    : std::runtime_error("syntax error at byte " + std::to_string(offset_) + ": " +
                         describe_expected(expected_)),
      offset(offset_),
      expected(std::move(expected_)) {}

namespace {

enum class Tok { Ident, Int, LParen, RParen, Comma, And, Arrow, Not, AttOp, End };

struct Token {
  Tok type;
  std::size_t offset;
  std::string text;        // Ident
  Time value = 0;          // Int
  Access access = Access::Direct;
  TimeQualifier::Kind qual = TimeQualifier::Kind::Untimed;  // AttOp
};

Token tok(Tok type, std::size_t offset) {
  Token t;
  t.type = type;
  t.offset = offset;
  return t;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto rest_starts = [&](const char* s) {
    std::size_t len = std::strlen(s);
    return text.compare(i, len, s) == 0;
  };
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t at = i;
    if (c == '(') {
      out.push_back(tok(Tok::LParen, at));
      ++i;
    } else if (c == ')') {
      out.push_back(tok(Tok::RParen, at));
      ++i;
    } else if (c == ',') {
      out.push_back(tok(Tok::Comma, at));
      ++i;
    } else if (c == '~') {
      out.push_back(tok(Tok::Not, at));
      ++i;
    } else if (rest_starts("/\\")) {
      out.push_back(tok(Tok::And, at));
      i += 2;
    } else if (rest_starts("->")) {
      out.push_back(tok(Tok::Arrow, at));
      i += 2;
    } else if (c == '*' || c == '|') {
      // Longest-match attestation operators: *|>=  *|><  *|>>  *|>  |>=  |><  |>>  |>
      Access access = Access::Direct;
      if (c == '*') {
        if (!rest_starts("*|>"))
          throw SyntaxError(at, {"attestation operator"});
        access = Access::Indirect;
        i += 3;
      } else {
        if (!rest_starts("|>")) throw SyntaxError(at, {"attestation operator"});
        i += 2;
      }
      TimeQualifier::Kind qual = TimeQualifier::Kind::Untimed;
      if (i < n) {
        if (text[i] == '=') {
          qual = TimeQualifier::Kind::At;
          ++i;
        } else if (text[i] == '<') {
          qual = TimeQualifier::Kind::Before;
          ++i;
        } else if (text[i] == '>') {
          qual = TimeQualifier::Kind::After;
          ++i;
        }
      }
      Token t = tok(Tok::AttOp, at);
      t.access = access;
      t.qual = qual;
      out.push_back(t);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      Time value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, value);
      if (ec != std::errc() || ptr != text.data() + j)
        throw SyntaxError(at, {"integer within 64 bits"});
      Token t = tok(Tok::Int, at);
      t.value = value;
      out.push_back(t);
      i = j;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(text[j])) ++j;
      Token t = tok(Tok::Ident, at);
      t.text = text.substr(i, j - i);
      out.push_back(t);
      i = j;
    } else {
      throw SyntaxError(at, {"identifier", "integer", "'('", "'~'", "operator"});
    }
  }
  out.push_back(tok(Tok::End, n));
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    Formula f = implies();
    if (peek().type != Tok::End)
      throw SyntaxError(peek().offset, {"end of input", "'/\\'", "'->'"});
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& take() { return tokens_[pos_++]; }

  Formula implies() {
    Formula lhs = conj();
    if (peek().type == Tok::Arrow) {
      take();
      return Formula::implication(std::move(lhs), implies());
    }
    return lhs;
  }

  Formula conj() {
    Formula lhs = neg();
    while (peek().type == Tok::And) {
      take();
      lhs = Formula::conjunction(std::move(lhs), neg());
    }
    return lhs;
  }

  Formula neg() {
    if (peek().type == Tok::Not) {
      take();
      return Formula::negation(neg());
    }
    return attest();
  }

  Formula attest() {
    if (peek().type == Tok::Ident && peek(1).type == Tok::AttOp) {
      std::string claimer = take().text;
      const Token& op = take();
      TimeQualifier when = TimeQualifier::untimed();
      if (op.qual != TimeQualifier::Kind::Untimed) {
        if (peek().type != Tok::Int) throw SyntaxError(peek().offset, {"time literal"});
        Time t = take().value;
        switch (op.qual) {
          case TimeQualifier::Kind::At: when = TimeQualifier::at(t); break;
          case TimeQualifier::Kind::Before: when = TimeQualifier::before(t); break;
          case TimeQualifier::Kind::After: when = TimeQualifier::after(t); break;
          default: break;
        }
      }
      return Formula::attest(std::move(claimer), op.access, when, neg());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::LParen: {
        take();
        Formula f = implies();
        if (peek().type != Tok::RParen) throw SyntaxError(peek().offset, {"')'"});
        take();
        return f;
      }
      case Tok::Int:
        take();
        return Formula::time_lit(t.value);
      case Tok::Ident: {
        std::string head = take().text;
        std::vector<Formula> args;
        if (peek().type == Tok::LParen) {
          take();
          args.push_back(implies());
          while (peek().type == Tok::Comma) {
            take();
            args.push_back(implies());
          }
          if (peek().type != Tok::RParen) throw SyntaxError(peek().offset, {"')'", "','"});
          take();
        }
        return Formula::atom(std::move(head), std::move(args));
      }
      default:
        throw SyntaxError(t.offset, {"identifier", "integer", "'('", "'~'"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

constexpr int kPrecImplies = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecAtom = 4;

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Implies: return kPrecImplies;
    case Formula::Kind::And: return kPrecAnd;
    case Formula::Kind::Not:
    case Formula::Kind::Attest: return kPrecNeg;
    default: return kPrecAtom;
  }
}

std::string attest_op(Access access, const TimeQualifier& when) {
  std::string op = access == Access::Indirect ? "*|>" : "|>";
  switch (when.kind()) {
    case TimeQualifier::Kind::Untimed: return op;
    case TimeQualifier::Kind::At: op += '='; break;
    case TimeQualifier::Kind::Before: op += '<'; break;
    case TimeQualifier::Kind::After: op += '>'; break;
  }
  return op + std::to_string(when.time());
}

void render(const Formula& f, int min_prec, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    render(f, kPrecImplies, out);
    out += ')';
    return;
  }
  switch (f.kind()) {
    case Formula::Kind::Implies:
      render(f.lhs(), kPrecAnd, out);
      out += " -> ";
      render(f.rhs(), kPrecImplies, out);
      break;
    case Formula::Kind::And:
      render(f.lhs(), kPrecAnd, out);
      out += " /\\ ";
      render(f.rhs(), kPrecNeg, out);
      break;
    case Formula::Kind::Not:
      out += '~';
      render(f.child(), kPrecNeg, out);
      break;
    case Formula::Kind::Attest:
      out += f.claimer();
      out += ' ';
      out += attest_op(f.access(), f.when());
      out += ' ';
      render(f.child(), kPrecNeg, out);
      break;
    case Formula::Kind::Atom:
      out += f.head();
      if (!f.args().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ',';
          render(f.args()[i], kPrecImplies, out);
        }
        out += ')';
      }
      break;
    case Formula::Kind::TimeLit:
      out += std::to_string(f.time_value());
      break;
  }
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(lex(text)).parse(); }

std::string print_formula(const Formula& f) {
  std::string out;
  render(f, kPrecImplies, out);
  return out;
}

}  // namespace cyberlogic
