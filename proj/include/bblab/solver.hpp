#pragma once

#include <cstdint>
#include <vector>

#include "bblab/cnf.hpp"
#include "bblab/formula.hpp"

namespace bblab {

inline constexpr std::int64_t kDefaultConflictBudget = 1'000'000;

enum class SatStatus { Sat, Unsat };

struct SatResult {
  SatStatus status = SatStatus::Unsat;
  // Total over vars(F) when status == Sat; empty otherwise.
  PartialAssignment model;
  // Assumption variables that do not occur in the formula (ignored).
  std::vector<VarName> ignored_assumptions;

  bool sat() const { return status == SatStatus::Sat; }
};

// Conflict-driven clause learner over two-watched-literal propagation.
// Decisions take the lowest-index unassigned variable at its preferred
// polarity (false unless set_phase says otherwise); no restarts, no
// randomness, so identical inputs give identical runs.  The session is
// incremental: learned clauses persist across solve() calls and assumptions
// are placed as pseudo-decisions below ordinary ones.  The conflict budget
// applies to each solve() call separately; exhausting it throws BudgetError
// and never misreports.
class SolverSession {
 public:
  explicit SolverSession(const CnfFormula& cnf,
                         std::int64_t conflict_budget = kDefaultConflictBudget);

  // Literal convention matches CnfFormula: +v true, -v false.
  SatStatus solve(const std::vector<int>& assumptions = {});

  // Valid after solve() returned Sat.
  bool model_value(int var) const;

  // Sets the polarity a decision on var tries first.  Steers which model a
  // satisfiable call lands on; never affects the sat/unsat answer.
  void set_phase(int var, bool value);

  std::int64_t conflicts() const { return total_conflicts_; }

 private:
  int lit_index(int lit) const {
    int v = lit > 0 ? lit : -lit;
    return 2 * (v - 1) + (lit < 0 ? 1 : 0);
  }
  // -1 unassigned, 0 false, 1 true
  int lit_value(int lit) const {
    int v = value_[lit > 0 ? lit : -lit];
    if (v < 0) return -1;
    return lit > 0 ? v : 1 - v;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void new_level();
  void enqueue(int lit, int reason_clause);
  int propagate();  // returns conflicting clause id or -1
  void cancel_until(int level);
  void analyze(int confl, std::vector<int>& learnt, int& bjlevel);
  bool attach_clause(std::vector<int> lits);  // false when immediately unsat
  int next_unassigned();

  int nvars_ = 0;
  bool ok_ = true;  // false once an empty clause is derived at level 0
  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<int>> watches_;  // lit index -> clause ids
  std::vector<int8_t> value_;              // var -> -1/0/1
  std::vector<int8_t> phase_;              // var -> preferred decision value
  std::vector<int> reason_;                // var -> clause id or -1
  std::vector<int> level_;                 // var -> decision level
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> cursor_stack_;
  std::vector<uint8_t> seen_;
  std::size_t qhead_ = 0;
  int cursor_ = 1;  // lowest possibly-unassigned variable
  std::int64_t budget_;
  std::int64_t total_conflicts_ = 0;
};

// One-shot satisfiability of a formula.  Deterministic: identical input
// gives an identical result, model included.
SatResult solve(const Formula& f,
                std::int64_t conflict_budget = kDefaultConflictBudget);

// Satisfiability with some variables pinned.  Equivalent to solving
// substitute(f, assumptions); bindings for variables absent from f are
// reported back in ignored_assumptions.
SatResult solve_assuming(const Formula& f, const PartialAssignment& assumptions,
                         std::int64_t conflict_budget = kDefaultConflictBudget);

}  // namespace bblab
