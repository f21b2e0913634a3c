#include "bblab/formula.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace bblab {

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_all_ident(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

// Digits only, no leading zero (single "0" is still rejected: indices are
// 1-based), value fits in a long.
bool parse_index(std::string_view s, long* out) {
  if (s.empty() || s.size() > 15) return false;
  if (s[0] == '0') return false;
  long v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  if (v < 1) return false;
  *out = v;
  return true;
}

std::string index_text(long index) { return std::to_string(index); }

}  // namespace

bool is_valid_tag_text(std::string_view tag) {
  if (tag.empty()) return false;
  for (char c : tag) {
    if (c <= ' ' || c > '~') return false;  // control, space, non-ASCII
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',') return false;
  }
  return true;
}

VarName VarName::tagged(std::string tag, long index) {
  if (!is_valid_tag_text(tag))
    throw DomainError("invalid machine tag text in variable name: '" + tag +
                      "'");
  if (index < 1) throw DomainError("tagged variable index must be >= 1");
  VarName v;
  v.kind_ = Kind::Tagged;
  v.tag_ = std::move(tag);
  v.index_ = index;
  v.text_ = "x[" + v.tag_ + "," + index_text(index) + "]";
  return v;
}

VarName VarName::zvar(long index, bool primed) {
  if (index < 1) throw DomainError("z-series index must be >= 1");
  VarName v;
  v.kind_ = Kind::ZSeries;
  v.index_ = index;
  v.primed_ = primed;
  v.text_ = (primed ? "zp." : "z.") + index_text(index);
  return v;
}

VarName VarName::freevar(std::string name) {
  if (!is_all_ident(name))
    throw DomainError("free variable name must be nonempty over [a-z0-9_]: '" +
                      name + "'");
  VarName v;
  v.kind_ = Kind::Free;
  v.tag_ = name;
  v.text_ = std::move(name);
  return v;
}

VarName VarName::parse(std::string_view token) {
  long idx = 0;
  if (token.rfind("zp.", 0) == 0) {
    if (!parse_index(token.substr(3), &idx))
      throw ParseError("bad zp-series index in '" + std::string(token) + "'");
    return zvar(idx, true);
  }
  if (token.rfind("z.", 0) == 0) {
    if (!parse_index(token.substr(2), &idx))
      throw ParseError("bad z-series index in '" + std::string(token) + "'");
    return zvar(idx, false);
  }
  if (token.rfind("x[", 0) == 0) {
    if (token.back() != ']')
      throw ParseError("tagged name must end with ']': '" + std::string(token) +
                       "'");
    std::string_view body = token.substr(2, token.size() - 3);
    std::size_t comma = body.rfind(',');
    if (comma == std::string_view::npos)
      throw ParseError("tagged name needs 'x[TAG,INDEX]': '" +
                       std::string(token) + "'");
    std::string_view tag = body.substr(0, comma);
    if (!is_valid_tag_text(tag))
      throw ParseError("invalid tag in '" + std::string(token) + "'");
    if (!parse_index(body.substr(comma + 1), &idx))
      throw ParseError("bad index in '" + std::string(token) + "'");
    return tagged(std::string(tag), idx);
  }
  if (!is_all_ident(token))
    throw ParseError("invalid variable name '" + std::string(token) + "'");
  return freevar(std::string(token));
}

const std::string& VarName::tag() const {
  if (kind_ != Kind::Tagged)
    throw DomainError("tag() on a non-tagged variable name");
  return tag_;
}

long VarName::index() const {
  if (kind_ == Kind::Free)
    throw DomainError("index() on a free variable name");
  return index_;
}

bool VarName::primed() const {
  if (kind_ != Kind::ZSeries)
    throw DomainError("primed() on a non-z-series variable name");
  return primed_;
}

Formula Formula::var(VarName name) {
  return Formula(std::make_shared<const Node>(std::move(name)));
}

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(
      Kind::Not, std::vector<Formula>{std::move(f)}));
}

Formula Formula::conj(std::vector<Formula> children) {
  if (children.size() < 2)
    throw DomainError("'and' requires at least two children");
  return Formula(std::make_shared<const Node>(Kind::And, std::move(children)));
}

Formula Formula::disj(std::vector<Formula> children) {
  if (children.size() < 2)
    throw DomainError("'or' requires at least two children");
  return Formula(std::make_shared<const Node>(Kind::Or, std::move(children)));
}

Formula Formula::literal(VarName name, bool positive) {
  Formula v = var(std::move(name));
  return positive ? v : negate(std::move(v));
}

const VarName& Formula::name() const {
  if (node_->kind != Kind::Var)
    throw DomainError("name() on a non-variable node");
  return node_->name;
}

const std::vector<Formula>& Formula::children() const {
  if (node_->kind == Kind::Var)
    throw DomainError("children() on a variable node");
  return node_->kids;
}

bool Formula::same_as(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  if (node_->kind == Kind::Var) return node_->name == other.node_->name;
  const auto& a = node_->kids;
  const auto& b = other.node_->kids;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].same_as(b[i])) return false;
  return true;
}

namespace {

void serialize_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Var:
      out += "(var ";
      out += f.name().text();
      out += ')';
      return;
    case Formula::Kind::Not:
      out += "(not ";
      serialize_into(f.child(0), out);
      out += ')';
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out += f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const Formula& c : f.children()) {
        out += ' ';
        serialize_into(c, out);
      }
      out += ')';
      return;
  }
}

struct Token {
  enum class Type { LParen, RParen, Atom, End } type;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    if (i_ >= text_.size()) return {Token::Type::End, {}, i_};
    std::size_t start = i_;
    char c = text_[i_];
    if (c == '(') {
      ++i_;
      return {Token::Type::LParen, text_.substr(start, 1), start};
    }
    if (c == ')') {
      ++i_;
      return {Token::Type::RParen, text_.substr(start, 1), start};
    }
    while (i_ < text_.size() && text_[i_] != '(' && text_[i_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    return {Token::Type::Atom, text_.substr(start, i_ - start), start};
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
};

constexpr int kMaxParseDepth = 10000;

Formula parse_node(Lexer& lex, int depth) {
  if (depth > kMaxParseDepth) throw ParseError("formula nesting too deep");
  Token t = lex.next();
  if (t.type == Token::Type::End)
    throw ParseError("empty formula is not allowed", t.pos);
  if (t.type != Token::Type::LParen)
    throw ParseError("expected '(' near '" + std::string(t.text) + "'", t.pos);
  Token head = lex.next();
  if (head.type != Token::Type::Atom)
    throw ParseError("expected node kind after '('", head.pos);

  if (head.text == "var") {
    Token name = lex.next();
    if (name.type != Token::Type::Atom)
      throw ParseError("expected variable name after 'var'", name.pos);
    VarName v = [&] {
      try {
        return VarName::parse(name.text);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), name.pos);
      }
    }();
    Token close = lex.next();
    if (close.type != Token::Type::RParen)
      throw ParseError("expected ')' after variable name", close.pos);
    return Formula::var(std::move(v));
  }

  if (head.text == "not") {
    Formula child = parse_node(lex, depth + 1);
    Token close = lex.next();
    if (close.type != Token::Type::RParen)
      throw ParseError("'not' takes exactly one operand", close.pos);
    return Formula::negate(std::move(child));
  }

  if (head.text == "and" || head.text == "or") {
    bool conj = head.text == "and";
    std::vector<Formula> kids;
    for (;;) {
      // Peek by re-lexing: grab the next token and push back is awkward, so
      // parse children until ')' by inspecting a copied lexer state.
      Lexer probe = lex;
      Token t2 = probe.next();
      if (t2.type == Token::Type::RParen) {
        lex = probe;
        break;
      }
      if (t2.type == Token::Type::End)
        throw ParseError("unterminated '(' in formula", t2.pos);
      kids.push_back(parse_node(lex, depth + 1));
    }
    if (kids.size() < 2)
      throw ParseError(std::string(conj ? "'and'" : "'or'") +
                           " requires at least two operands",
                       head.pos);
    return conj ? Formula::conj(std::move(kids))
                : Formula::disj(std::move(kids));
  }

  throw ParseError("unknown node kind '" + std::string(head.text) + "'",
                   head.pos);
}

}  // namespace

std::string serialize_formula(const Formula& f) {
  std::string out;
  serialize_into(f, out);
  return out;
}

Formula parse_formula(std::string_view text) {
  Lexer lex(text);
  Formula f = parse_node(lex, 0);
  Token tail = lex.next();
  if (tail.type != Token::Type::End)
    throw ParseError("trailing content after formula", tail.pos);
  return f;
}

namespace {

void collect_vars(const Formula& f, std::unordered_set<const void*>& seen,
                  std::set<VarName>& out) {
  if (!seen.insert(f.id()).second) return;
  if (f.kind() == Formula::Kind::Var) {
    out.insert(f.name());
    return;
  }
  for (const Formula& c : f.children()) collect_vars(c, seen, out);
}

}  // namespace

std::set<VarName> vars(const Formula& f) {
  std::set<VarName> out;
  std::unordered_set<const void*> seen;
  collect_vars(f, seen, out);
  return out;
}

std::size_t numvars(const Formula& f) { return vars(f).size(); }

namespace {

FormulaOrBool substitute_rec(
    const Formula& f, const PartialAssignment& a,
    std::unordered_map<const void*, FormulaOrBool>& memo) {
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;

  FormulaOrBool result = [&]() -> FormulaOrBool {
    switch (f.kind()) {
      case Formula::Kind::Var: {
        auto it = a.find(f.name());
        if (it == a.end()) return f;
        return it->second;
      }
      case Formula::Kind::Not: {
        FormulaOrBool c = substitute_rec(f.child(0), a, memo);
        if (std::holds_alternative<bool>(c)) return !std::get<bool>(c);
        const Formula& cf = std::get<Formula>(c);
        if (cf.id() == f.child(0).id()) return f;
        return Formula::negate(cf);
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        const bool is_and = f.kind() == Formula::Kind::And;
        std::vector<Formula> kept;
        bool changed = false;
        for (const Formula& c : f.children()) {
          FormulaOrBool r = substitute_rec(c, a, memo);
          if (std::holds_alternative<bool>(r)) {
            bool b = std::get<bool>(r);
            if (b != is_and) return b;  // annihilator: false/and, true/or
            changed = true;             // identity element: drop
            continue;
          }
          const Formula& rf = std::get<Formula>(r);
          if (rf.id() != c.id()) changed = true;
          kept.push_back(rf);
        }
        if (kept.empty()) return is_and;  // all children were identities
        if (!changed) return f;
        if (kept.size() == 1) return kept.front();
        return is_and ? Formula::conj(std::move(kept))
                      : Formula::disj(std::move(kept));
      }
    }
    throw DomainError("corrupt formula node");
  }();

  memo.emplace(f.id(), result);
  return result;
}

}  // namespace

FormulaOrBool substitute(const Formula& f, const PartialAssignment& a) {
  if (a.empty()) return f;
  std::unordered_map<const void*, FormulaOrBool> memo;
  return substitute_rec(f, a, memo);
}

namespace {

bool evaluate_rec(const Formula& f, const PartialAssignment& a,
                  std::unordered_map<const void*, bool>& memo) {
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;
  bool result;
  switch (f.kind()) {
    case Formula::Kind::Var: {
      auto it = a.find(f.name());
      if (it == a.end())
        throw DomainError("evaluate: unbound variable '" + f.name().text() +
                          "'");
      result = it->second;
      break;
    }
    case Formula::Kind::Not:
      result = !evaluate_rec(f.child(0), a, memo);
      break;
    case Formula::Kind::And: {
      result = true;
      for (const Formula& c : f.children())
        if (!evaluate_rec(c, a, memo)) {
          result = false;
          break;
        }
      break;
    }
    case Formula::Kind::Or: {
      result = false;
      for (const Formula& c : f.children())
        if (evaluate_rec(c, a, memo)) {
          result = true;
          break;
        }
      break;
    }
    default:
      throw DomainError("corrupt formula node");
  }
  memo.emplace(f.id(), result);
  return result;
}

}  // namespace

bool evaluate(const Formula& f, const PartialAssignment& a) {
  std::unordered_map<const void*, bool> memo;
  return evaluate_rec(f, a, memo);
}

bool BackboneCertificate::well_formed() const {
  if (value.size() != vars.size()) return false;
  for (const auto& [v, _] : value)
    if (!vars.count(v)) return false;
  return true;
}

std::string bits_of(const std::vector<VarName>& order,
                    const PartialAssignment& a) {
  std::string out;
  out.reserve(order.size());
  for (const VarName& v : order) {
    auto it = a.find(v);
    if (it == a.end())
      throw DomainError("bits_of: unbound variable '" + v.text() + "'");
    out += it->second ? '1' : '0';
  }
  return out;
}

}  // namespace bblab
