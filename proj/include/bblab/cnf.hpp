#pragma once

#include <map>
#include <string>
#include <vector>

#include "bblab/formula.hpp"

namespace bblab {

// Clausal form.  Literals are nonzero ints: +v / -v for CNF variable v in
// 1..num_vars.  origin_map sends each variable of the source formula to its
// CNF index; higher indices are definitional auxiliaries.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::map<VarName, int> origin_map;
};

// Tseitin transform with full biconditional definitions.  Source variables
// get indices 1..n in lexicographic name order; every and/or node gets an
// auxiliary defined in both directions, so each satisfying assignment of the
// source formula extends to exactly one CNF model.  Negations become literal
// signs and add no auxiliaries.  Shared subtrees share their auxiliary.
CnfFormula tseitin(const Formula& f);

// DIMACS text ("p cnf <vars> <clauses>" header, zero-terminated clauses).
std::string to_dimacs(const CnfFormula& cnf);

// Companion variable map: one "index<TAB>name" line per origin variable,
// ascending by index.
std::string origin_map_text(const CnfFormula& cnf);

// Parses DIMACS back into clausal form (comments allowed; origin_map empty).
CnfFormula parse_dimacs(std::string_view text);

}  // namespace bblab
