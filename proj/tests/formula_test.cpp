#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bblab/formula.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bblab;
using testing::FormulaGen;

TEST_CASE("variable names: the three kinds and their accessors") {
  VarName t = VarName::tagged("e1:a:a:a:", 7);
  CHECK(t.kind() == VarName::Kind::Tagged);
  CHECK(t.text() == "x[e1:a:a:a:,7]");
  CHECK(t.tag() == "e1:a:a:a:");
  CHECK(t.index() == 7);

  VarName z = VarName::zvar(3);
  CHECK(z.kind() == VarName::Kind::ZSeries);
  CHECK(z.text() == "z.3");
  CHECK(z.index() == 3);
  CHECK(!z.primed());

  VarName zp = VarName::zvar(12, true);
  CHECK(zp.text() == "zp.12");
  CHECK(zp.primed());

  VarName f = VarName::freevar("foo_bar");
  CHECK(f.kind() == VarName::Kind::Free);
  CHECK(f.text() == "foo_bar");

  CHECK_THROWS_AS(t.primed(), DomainError);
  CHECK_THROWS_AS(z.tag(), DomainError);
  CHECK_THROWS_AS(f.index(), DomainError);
}

TEST_CASE("variable names: factory validation") {
  CHECK_THROWS_AS(VarName::zvar(0), DomainError);
  CHECK_THROWS_AS(VarName::zvar(-4, true), DomainError);
  CHECK_THROWS_AS(VarName::tagged("e1:a:a:a:", 0), DomainError);
  CHECK_THROWS_AS(VarName::tagged("", 1), DomainError);
  CHECK_THROWS_AS(VarName::tagged("has space", 1), DomainError);
  CHECK_THROWS_AS(VarName::freevar(""), DomainError);
  CHECK_THROWS_AS(VarName::freevar("Capital"), DomainError);
  CHECK_THROWS_AS(VarName::freevar("with-dash"), DomainError);
}

TEST_CASE("variable names: parse accepts exactly the canonical spellings") {
  CHECK(VarName::parse("z.3") == VarName::zvar(3));
  CHECK(VarName::parse("zp.12") == VarName::zvar(12, true));
  CHECK(VarName::parse("x[e1:a:a:a:,2]") == VarName::tagged("e1:a:a:a:", 2));
  CHECK(VarName::parse("foo_bar") == VarName::freevar("foo_bar"));
  // 'z3' has no dot, so it is an ordinary identifier.
  CHECK(VarName::parse("z3").kind() == VarName::Kind::Free);

  CHECK_THROWS_AS(VarName::parse("z.0"), ParseError);
  CHECK_THROWS_AS(VarName::parse("z.-1"), ParseError);
  CHECK_THROWS_AS(VarName::parse("z.01"), ParseError);  // no leading zeros
  CHECK_THROWS_AS(VarName::parse("zp.00"), ParseError);
  CHECK_THROWS_AS(VarName::parse("Abc"), ParseError);
  CHECK_THROWS_AS(VarName::parse("x[e1:a:a:a:,0]"), ParseError);
  CHECK_THROWS_AS(VarName::parse("x[e1:a:a:a:,2"), ParseError);
  CHECK_THROWS_AS(VarName::parse("x[,2]"), ParseError);
  CHECK_THROWS_AS(VarName::parse(""), ParseError);
}

TEST_CASE("variable names: ordering is bytewise on the canonical text") {
  std::vector<VarName> v{VarName::zvar(2), VarName::freevar("a"),
                         VarName::tagged("e1:a:a:a:", 1), VarName::zvar(10)};
  std::set<VarName> s(v.begin(), v.end());
  std::vector<std::string> texts;
  for (const auto& n : s) texts.push_back(n.text());
  // 'x[' < 'z.' and "z.10" < "z.2" bytewise.
  CHECK(texts == std::vector<std::string>{"a", "x[e1:a:a:a:,1]", "z.10", "z.2"});
}

TEST_CASE("formula construction: arity rules and accessors") {
  Formula a = Formula::var(VarName::freevar("a"));
  Formula b = Formula::var(VarName::freevar("b"));
  CHECK_THROWS_AS(Formula::conj({a}), DomainError);
  CHECK_THROWS_AS(Formula::disj({b}), DomainError);
  CHECK_THROWS_AS(Formula::conj({}), DomainError);

  Formula f = Formula::conj({a, Formula::negate(b)});
  CHECK(f.kind() == Formula::Kind::And);
  CHECK(f.children().size() == 2);
  CHECK(f.child(0).name() == VarName::freevar("a"));
  CHECK_THROWS_AS(f.name(), DomainError);
  CHECK_THROWS_AS(a.children(), DomainError);

  CHECK(serialize_formula(Formula::literal(VarName::freevar("c"), true)) ==
        "(var c)");
  CHECK(serialize_formula(Formula::literal(VarName::freevar("c"), false)) ==
        "(not (var c))");
}

TEST_CASE("serialization golden forms") {
  Formula f = parse_formula("(or (and (var a) (not (var b))) (var z.2))");
  CHECK(serialize_formula(f) == "(or (and (var a) (not (var b))) (var z.2))");
  CHECK(f.kind() == Formula::Kind::Or);
  CHECK(f.child(0).child(1).kind() == Formula::Kind::Not);
}

TEST_CASE("parse then serialize is the identity on generated formulas") {
  FormulaGen gen(20260416);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen(6, 5);
    std::string s = serialize_formula(f);
    Formula g = parse_formula(s);
    CHECK(serialize_formula(g) == s);
    CHECK(g.same_as(f));
  }
}

TEST_CASE("parse errors carry positions") {
  auto pos_of = [](const std::string& text) {
    try {
      parse_formula(text);
    } catch (const ParseError& e) {
      return e.position;
    }
    return ParseError::npos;
  };
  CHECK(pos_of("") == 0);
  CHECK(pos_of("x") == 0);             // no opening paren
  CHECK(pos_of("(var x") == 6);        // unclosed
  CHECK(pos_of("(var x) y") == 8);     // trailing content
  CHECK(pos_of("(xor (var a) (var b))") == 1);
  CHECK(pos_of("(and (var a))") == 1);  // arity
  CHECK(pos_of("(not (var a) (var b))") == 13);
  CHECK(pos_of("(var X)") == 5);       // bad name, points at the name
  CHECK(pos_of("(var)") == 4);
}

TEST_CASE("parser depth guard rejects pathological nesting") {
  auto nested = [](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += "(not ";
    s += "(var a)";
    for (int i = 0; i < n; ++i) s += ")";
    return s;
  };
  CHECK_NOTHROW(parse_formula(nested(9000)));
  CHECK_THROWS_WITH_AS(parse_formula(nested(10001)),
                       "formula nesting too deep", ParseError);
}

TEST_CASE("vars and numvars count distinct names across sharing") {
  Formula f = parse_formula("(and (or (var a) (var b)) (or (var a) (var c)))");
  auto vs = vars(f);
  CHECK(vs.size() == 3);
  CHECK(numvars(f) == 3);
  CHECK(vs.count(VarName::freevar("b")) == 1);
}

TEST_CASE("substitute: identity, annihilation and collapse") {
  Formula f = parse_formula("(and (var a) (or (var b) (var c)))");
  // a := false annihilates the conjunction.
  auto r1 = substitute(f, {{VarName::freevar("a"), false}});
  REQUIRE(std::holds_alternative<bool>(r1));
  CHECK(std::get<bool>(r1) == false);
  // a := true leaves the disjunction, conjunction collapses to single child.
  auto r2 = substitute(f, {{VarName::freevar("a"), true}});
  REQUIRE(std::holds_alternative<Formula>(r2));
  CHECK(serialize_formula(std::get<Formula>(r2)) == "(or (var b) (var c))");
  // b := true inside or annihilates it upward.
  auto r3 = substitute(f, {{VarName::freevar("b"), true}});
  REQUIRE(std::holds_alternative<Formula>(r3));
  CHECK(serialize_formula(std::get<Formula>(r3)) == "(var a)");
  // Binding outside vars(f) is permitted and has no effect.
  auto r4 = substitute(f, {{VarName::freevar("zz"), true}});
  REQUIRE(std::holds_alternative<Formula>(r4));
  CHECK(std::get<Formula>(r4).same_as(f));
  // Empty assignment returns the formula itself.
  auto r5 = substitute(f, {});
  CHECK(std::get<Formula>(r5).same_as(f));
}

TEST_CASE("substitute: residual vars are a subset and semantics is preserved") {
  // Residual variables can be fewer than vars(f) minus the bound ones:
  // constant propagation may erase whole subtrees.  What must hold is the
  // subset direction plus agreement with the oracle on every extension.
  FormulaGen gen(977001);
  for (int round = 0; round < 400; ++round) {
    Formula f = gen(5, 4);
    auto fv = vars(f);
    PartialAssignment bound;
    for (const auto& v : fv)
      if (gen.coin()) bound[v] = gen.coin();

    auto res = substitute(f, bound);
    std::set<VarName> allowed;
    for (const auto& v : fv)
      if (!bound.count(v)) allowed.insert(v);

    if (std::holds_alternative<Formula>(res)) {
      const Formula& g = std::get<Formula>(res);
      for (const auto& v : vars(g)) {
        CHECK(allowed.count(v) == 1);
        CHECK(bound.count(v) == 0);
      }
    } else {
      // fine: fully decided
    }

    // Check agreement on a few random total extensions.
    for (int probe = 0; probe < 8; ++probe) {
      PartialAssignment total = bound;
      for (const auto& v : allowed) total[v] = gen.coin();
      bool expect = testing::eval_oracle(f, total);
      bool got = std::holds_alternative<bool>(res)
                     ? std::get<bool>(res)
                     : testing::eval_oracle(std::get<Formula>(res), total);
      CHECK(got == expect);
    }
  }
}

TEST_CASE("evaluate agrees with the reference and rejects unbound variables") {
  FormulaGen gen(5150);
  for (int round = 0; round < 300; ++round) {
    Formula f = gen(5, 4);
    auto a = gen.random_assignment(vars(f));
    CHECK(evaluate(f, a) == testing::eval_oracle(f, a));
  }
  Formula f = parse_formula("(and (var a) (var b))");
  CHECK_THROWS_AS(evaluate(f, {{VarName::freevar("a"), true}}), DomainError);
  // Extra bindings are harmless.
  PartialAssignment a{{VarName::freevar("a"), true},
                      {VarName::freevar("b"), true},
                      {VarName::freevar("c"), false}};
  CHECK(evaluate(f, a));
}

TEST_CASE("backbone certificates know their own well-formedness") {
  BackboneCertificate ok;
  ok.vars = {VarName::freevar("a"), VarName::freevar("b")};
  ok.value = {{VarName::freevar("a"), true}, {VarName::freevar("b"), false}};
  CHECK(ok.well_formed());

  BackboneCertificate missing = ok;
  missing.value.erase(VarName::freevar("b"));
  CHECK(!missing.well_formed());

  BackboneCertificate extra = ok;
  extra.value[VarName::freevar("c")] = true;
  CHECK(!extra.well_formed());

  BackboneCertificate empty;
  CHECK(empty.well_formed());  // the empty set with the empty assignment
}

TEST_CASE("bits_of renders values in the order asked") {
  PartialAssignment a{{VarName::zvar(1), true},
                      {VarName::zvar(2), false},
                      {VarName::freevar("q"), true}};
  std::vector<VarName> order{VarName::zvar(2), VarName::freevar("q"),
                             VarName::zvar(1)};
  CHECK(bits_of(order, a) == "011");
  CHECK(bits_of({}, a) == "");
  order.push_back(VarName::freevar("missing"));
  CHECK_THROWS_AS(bits_of(order, a), DomainError);
}

TEST_CASE("same_as sees through node sharing but not past structure") {
  Formula a = parse_formula("(and (var a) (var b))");
  Formula b = parse_formula("(and (var a) (var b))");
  Formula c = parse_formula("(and (var b) (var a))");
  CHECK(a.same_as(b));
  CHECK(!a.same_as(c));  // child order is structure
  Formula copy = a;
  CHECK(copy.same_as(a));
  CHECK(copy.id() == a.id());
}
