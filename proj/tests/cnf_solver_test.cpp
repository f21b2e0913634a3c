#include <algorithm>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bblab/cnf.hpp"
#include "bblab/formula.hpp"
#include "bblab/solver.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bblab;
using testing::FormulaGen;

namespace {

// Flat model count of a clause set, for checking the biconditional encoding.
std::size_t count_cnf_models(const CnfFormula& cnf) {
  REQUIRE(cnf.num_vars <= 22);
  std::size_t models = 0;
  for (std::uint32_t bits = 0; bits < (1u << cnf.num_vars); ++bits) {
    bool ok = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int lit : clause) {
        int v = lit > 0 ? lit : -lit;
        bool val = (bits >> (v - 1)) & 1;
        if ((lit > 0) == val) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) ++models;
  }
  return models;
}

}  // namespace

TEST_CASE("tseitin: source variables get lexicographic indices 1..n") {
  Formula f = parse_formula("(and (var mid) (or (var aa) (var z.2)))");
  CnfFormula cnf = tseitin(f);
  std::vector<std::pair<VarName, int>> entries(cnf.origin_map.begin(),
                                               cnf.origin_map.end());
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].first.text() == "aa");
  CHECK(entries[0].second == 1);
  CHECK(entries[1].first.text() == "mid");
  CHECK(entries[1].second == 2);
  CHECK(entries[2].first.text() == "z.2");
  CHECK(entries[2].second == 3);
  CHECK(cnf.num_vars > 3);  // auxiliaries come after
}

TEST_CASE("tseitin: literal-only formulas need no auxiliaries") {
  CnfFormula pos = tseitin(parse_formula("(var abc)"));
  CHECK(pos.num_vars == 1);
  REQUIRE(pos.clauses.size() == 1);
  CHECK(pos.clauses[0] == std::vector<int>{1});

  CnfFormula neg = tseitin(parse_formula("(not (var abc))"));
  CHECK(neg.num_vars == 1);
  REQUIRE(neg.clauses.size() == 1);
  CHECK(neg.clauses[0] == std::vector<int>{-1});
}

TEST_CASE("tseitin: every source model extends to exactly one clause model") {
  // Biconditional definitions make the auxiliary layer a function of the
  // source variables, so the model counts must match exactly.
  FormulaGen gen(640912);
  int done = 0;
  while (done < 120) {
    Formula f = gen(4, 3);
    CnfFormula cnf = tseitin(f);
    if (cnf.num_vars > 18) continue;  // keep the flat count cheap
    ++done;
    CHECK(count_cnf_models(cnf) == testing::all_models(f).size());
  }
}

TEST_CASE("tseitin: shared subtrees share one auxiliary") {
  Formula inner = parse_formula("(or (var a) (var b))");
  Formula f = Formula::conj({inner, Formula::negate(inner)});
  CnfFormula cnf = tseitin(f);
  // Variables: a, b, one aux for the or, one for the and: 4 total.
  CHECK(cnf.num_vars == 4);
}

TEST_CASE("DIMACS rendering and parsing invert each other") {
  Formula f = parse_formula("(and (var a) (or (var b) (not (var c))))");
  CnfFormula cnf = tseitin(f);
  std::string text = to_dimacs(cnf);
  CHECK(text.rfind("p cnf ", 0) == 0);
  CnfFormula back = parse_dimacs(text);
  CHECK(back.num_vars == cnf.num_vars);
  CHECK(back.clauses == cnf.clauses);
  CHECK(back.origin_map.empty());

  std::string mapping = origin_map_text(cnf);
  CHECK(mapping == "1\ta\n2\tb\n3\tc\n");
}

TEST_CASE("DIMACS parse failures") {
  CHECK_THROWS_AS(parse_dimacs("p wnf 2 1\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);          // no header
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);  // range
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);  // no zero
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);  // count
  CnfFormula ok = parse_dimacs("c intro\np cnf 1 1\nc middle\n1 0\n");
  CHECK(ok.num_vars == 1);
  REQUIRE(ok.clauses.size() == 1);
  CHECK(ok.clauses[0] == std::vector<int>{1});
}

TEST_CASE("solver agrees with the truth table on generated formulas") {
  FormulaGen gen(31337);
  int sat_seen = 0, unsat_seen = 0;
  for (int round = 0; round < 500; ++round) {
    Formula f = gen(5, 4);
    auto models = testing::all_models(f);
    SatResult r = solve(f);
    CHECK(r.sat() == !models.empty());
    if (r.sat()) {
      ++sat_seen;
      // The model must bind exactly vars(f) and satisfy it.
      CHECK(r.model.size() == vars(f).size());
      CHECK(testing::eval_oracle(f, r.model));
    } else {
      ++unsat_seen;
      CHECK(r.model.empty());
    }
  }
  // The generator must exercise both answers or the test proves little.
  CHECK(sat_seen > 50);
  CHECK(unsat_seen > 50);
}

TEST_CASE("solving is deterministic, model included") {
  FormulaGen gen(8086);
  for (int round = 0; round < 60; ++round) {
    Formula f = gen(6, 4);
    SatResult a = solve(f);
    SatResult b = solve(f);
    CHECK(a.status == b.status);
    CHECK(a.model == b.model);
  }
}

TEST_CASE("solve_assuming matches substitute-then-solve") {
  FormulaGen gen(271828);
  for (int round = 0; round < 200; ++round) {
    Formula f = gen(5, 4);
    auto fv = vars(f);
    PartialAssignment pin;
    for (const auto& v : fv)
      if (gen.coin() && gen.coin()) pin[v] = gen.coin();

    SatResult direct = solve_assuming(f, pin);
    auto res = substitute(f, pin);
    bool expect = std::holds_alternative<bool>(res)
                      ? std::get<bool>(res)
                      : solve(std::get<Formula>(res)).sat();
    CHECK(direct.sat() == expect);
    if (direct.sat()) {
      // Assumptions must be honored verbatim in the model.
      for (const auto& [v, b] : pin) CHECK(direct.model.at(v) == b);
      CHECK(testing::eval_oracle(f, direct.model));
    }
  }
}

TEST_CASE("assumptions over absent variables are reported, not applied") {
  Formula f = parse_formula("(or (var aa) (var bb))");
  PartialAssignment pin{{VarName::freevar("zz"), true},
                        {VarName::freevar("aa"), false}};
  SatResult r = solve_assuming(f, pin);
  CHECK(r.sat());
  REQUIRE(r.ignored_assumptions.size() == 1);
  CHECK(r.ignored_assumptions[0] == VarName::freevar("zz"));
  CHECK(r.model.at(VarName::freevar("aa")) == false);
  CHECK(r.model.at(VarName::freevar("bb")) == true);
  CHECK(r.model.count(VarName::freevar("zz")) == 0);
}

TEST_CASE("conflicting assumptions give unsat without poisoning the session") {
  Formula f = parse_formula("(and (or (var a) (var b)) (not (var a)))");
  CnfFormula cnf = tseitin(f);
  SolverSession s(cnf);
  int a = cnf.origin_map.at(VarName::freevar("a"));
  int b = cnf.origin_map.at(VarName::freevar("b"));
  CHECK(s.solve({a}) == SatStatus::Unsat);   // a is forced false
  CHECK(s.solve({-a}) == SatStatus::Sat);
  CHECK(s.solve({b}) == SatStatus::Sat);
  CHECK(s.model_value(b));
  CHECK(s.solve() == SatStatus::Sat);        // plain call still fine
  CHECK_THROWS_AS(s.solve({cnf.num_vars + 1}), DomainError);
}

TEST_CASE("decision phase hints steer the model, never the answer") {
  Formula f = parse_formula("(or (var a) (var b))");
  CnfFormula cnf = tseitin(f);
  int a = cnf.origin_map.at(VarName::freevar("a"));
  int b = cnf.origin_map.at(VarName::freevar("b"));

  SolverSession plain(cnf);
  REQUIRE(plain.solve() == SatStatus::Sat);
  CHECK(!plain.model_value(a));  // false-first default
  CHECK(plain.model_value(b));

  SolverSession hinted(cnf);
  hinted.set_phase(a, true);
  REQUIRE(hinted.solve() == SatStatus::Sat);
  CHECK(hinted.model_value(a));
  CHECK(!hinted.model_value(b));
  CHECK_THROWS_AS(hinted.set_phase(0, true), DomainError);
  CHECK_THROWS_AS(hinted.set_phase(cnf.num_vars + 1, false), DomainError);

  // Hints cannot flip satisfiability.
  Formula g = parse_formula("(and (var a) (not (var a)))");
  CnfFormula gc = tseitin(g);
  SolverSession s(gc);
  s.set_phase(1, true);
  CHECK(s.solve() == SatStatus::Unsat);
}

TEST_CASE("handcrafted clause sets: sanitization and empty clause") {
  CnfFormula cnf;
  cnf.num_vars = 2;
  cnf.clauses = {{1, -1}, {2, 2}};  // tautology dropped, duplicate collapsed
  SolverSession s(cnf);
  CHECK(s.solve() == SatStatus::Sat);
  CHECK(s.model_value(2));

  CnfFormula bad;
  bad.num_vars = 1;
  bad.clauses = {{}};
  SolverSession t(bad);
  CHECK(t.solve() == SatStatus::Unsat);
}

TEST_CASE("a zero conflict budget throws once search needs a conflict") {
  // Unsatisfiable over two variables; level-0 propagation alone cannot
  // refute it, so the first conflict trips the budget.
  Formula f = parse_formula(
      "(and (or (var a) (var b)) (or (not (var a)) (var b)) "
      "(or (var a) (not (var b))) (or (not (var a)) (not (var b))))");
  CHECK_THROWS_AS(solve(f, 0), BudgetError);
  CHECK(!solve(f).sat());  // default budget settles it

  // Propagation-only instances never conflict, so budget 0 is enough.
  CHECK(solve(parse_formula("(and (var a) (var b))"), 0).sat());
}

TEST_CASE("conflict counter accumulates across a session") {
  Formula f = parse_formula(
      "(and (or (var a) (var b)) (or (not (var a)) (var b)) "
      "(or (var a) (not (var b))) (or (not (var a)) (not (var b))))");
  CnfFormula cnf = tseitin(f);
  SolverSession s(cnf);
  CHECK(s.solve() == SatStatus::Unsat);
  auto after_first = s.conflicts();
  CHECK(after_first > 0);
  CHECK(s.solve() == SatStatus::Unsat);
  CHECK(s.conflicts() >= after_first);
}
