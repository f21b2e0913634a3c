#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bblab/formula.hpp"
#include "bblab/solver.hpp"

namespace bblab {

// Default cap on formula variables for the exhaustive analysis.  The
// decomposition usually handles far larger inputs, but the worst case is
// exponential, so callers must opt in above this.
inline constexpr std::size_t kDefaultBruteLimit = 22;

struct FrozenReport {
  enum class Method { Brute, Sat };

  bool satisfiable = false;
  // Sorted by variable name; empty when unsatisfiable.
  std::vector<std::pair<VarName, bool>> frozen;
  Method method = Method::Brute;
};

// Exact frozen-variable computation by model-space analysis.  Decomposes
// disjunctions whose branches are independently satisfiable and conjunctions
// with variable-disjoint parts before falling back to pruned enumeration.
// Throws LimitError when the formula has more than `limit` variables.
FrozenReport frozen_vars_brute(const Formula& f,
                               std::size_t limit = kDefaultBruteLimit);

// Frozen variables via repeated satisfiability queries: one model seeds the
// candidate set, then each candidate is asked to flip.  Deterministic.
FrozenReport frozen_vars_sat(const Formula& f,
                             std::int64_t conflict_budget = kDefaultConflictBudget);

// Checks that assigning `a` (whose domain must be exactly `s`) leaves the
// formula satisfiable and that every model of `f` agrees with `a`.  Throws
// DomainError when domain(a) != s or when s mentions variables not in f.
bool verify_backbone(const Formula& f, const std::vector<VarName>& s,
                     const PartialAssignment& a,
                     std::int64_t conflict_budget = kDefaultConflictBudget);

// Recovers the forced values on `s` from one model and certifies them with
// verify_backbone.  Throws NotABackboneError when the formula is
// unsatisfiable or some variable in `s` is not frozen.
PartialAssignment backbone_value(const Formula& f,
                                 const std::vector<VarName>& s,
                                 std::int64_t conflict_budget = kDefaultConflictBudget);

// "SAT" or "UNSAT" on the first line, then one "frozen <name> <0|1>" line
// per frozen variable in sorted order.
std::string format_report(const FrozenReport& report);

}  // namespace bblab
