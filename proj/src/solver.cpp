#include "bblab/solver.hpp"

#include <algorithm>

namespace bblab {

SolverSession::SolverSession(const CnfFormula& cnf, std::int64_t conflict_budget)
    : nvars_(cnf.num_vars),
      watches_(2 * static_cast<std::size_t>(cnf.num_vars)),
      value_(static_cast<std::size_t>(cnf.num_vars) + 1, -1),
      phase_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
      reason_(static_cast<std::size_t>(cnf.num_vars) + 1, -1),
      level_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
      seen_(static_cast<std::size_t>(cnf.num_vars) + 1, 0),
      budget_(conflict_budget) {
  trail_.reserve(value_.size());
  for (const auto& clause : cnf.clauses)
    if (!attach_clause(clause)) {
      ok_ = false;
      break;
    }
}

bool SolverSession::attach_clause(std::vector<int> lits) {
  // Sanitize: drop duplicate literals, skip tautologies.
  std::sort(lits.begin(), lits.end(),
            [](int a, int b) { return std::abs(a) != std::abs(b)
                                          ? std::abs(a) < std::abs(b)
                                          : a < b; });
  std::vector<int> out;
  out.reserve(lits.size());
  for (int lit : lits) {
    if (!out.empty() && out.back() == lit) continue;
    if (!out.empty() && out.back() == -lit) return true;  // tautology
    out.push_back(lit);
  }
  if (out.empty()) return false;
  if (out.size() == 1) {
    int v = lit_value(out[0]);
    if (v == 0) return false;
    if (v == -1) enqueue(out[0], -1);
    return true;
  }
  int id = static_cast<int>(clauses_.size());
  watches_[lit_index(out[0])].push_back(id);
  watches_[lit_index(out[1])].push_back(id);
  clauses_.push_back(std::move(out));
  return true;
}

void SolverSession::new_level() {
  trail_lim_.push_back(static_cast<int>(trail_.size()));
  cursor_stack_.push_back(cursor_);
}

void SolverSession::enqueue(int lit, int reason_clause) {
  int v = lit > 0 ? lit : -lit;
  value_[v] = lit > 0 ? 1 : 0;
  reason_[v] = reason_clause;
  level_[v] = decision_level();
  trail_.push_back(lit);
}

int SolverSession::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];          // p just became true
    int idx = lit_index(-p);           // clauses watching ~p must react
    std::vector<int>& wl = watches_[idx];
    std::size_t i = 0, j = 0;
    while (i < wl.size()) {
      int ci = wl[i++];
      std::vector<int>& c = clauses_[ci];
      if (c[0] == -p) std::swap(c[0], c[1]);
      // Invariant: c[1] == -p, which is now false.
      if (lit_value(c[0]) == 1) {
        wl[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[lit_index(c[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Unit or conflict.
      wl[j++] = ci;
      if (lit_value(c[0]) == 0) {
        while (i < wl.size()) wl[j++] = wl[i++];
        wl.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    wl.resize(j);
  }
  return -1;
}

void SolverSession::cancel_until(int target) {
  if (decision_level() <= target) return;
  int restore = cursor_stack_[target];
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[target];
       --i) {
    int v = trail_[i] > 0 ? trail_[i] : -trail_[i];
    value_[v] = -1;
    reason_[v] = -1;
  }
  trail_.resize(trail_lim_[target]);
  trail_lim_.resize(target);
  cursor_stack_.resize(target);
  cursor_ = restore;
  qhead_ = trail_.size();
}

void SolverSession::analyze(int confl, std::vector<int>& learnt, int& bjlevel) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int counter = 0;
  int p = 0;  // 0 = none yet
  int idx = static_cast<int>(trail_.size()) - 1;
  std::vector<int> touched;

  int ci = confl;
  do {
    const std::vector<int>& c = clauses_[ci];
    // For a reason clause, c[0] is the literal it propagated; skip it.
    for (std::size_t k = (p == 0 ? 0 : 1); k < c.size(); ++k) {
      int q = c[k];
      int v = q > 0 ? q : -q;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      touched.push_back(v);
      if (level_[v] == decision_level())
        ++counter;
      else
        learnt.push_back(q);
    }
    while (!seen_[std::abs(trail_[idx])]) --idx;
    p = trail_[idx];
    int v = std::abs(p);
    seen_[v] = 0;
    ci = reason_[v];
    --idx;
    --counter;
  } while (counter > 0);
  learnt[0] = -p;

  bjlevel = 0;
  std::size_t best = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    int lv = level_[std::abs(learnt[k])];
    if (lv > bjlevel) {
      bjlevel = lv;
      best = k;
    }
  }
  if (best != 0) std::swap(learnt[1], learnt[best]);
  for (int v : touched) seen_[v] = 0;
}

int SolverSession::next_unassigned() {
  while (cursor_ <= nvars_ && value_[cursor_] != -1) ++cursor_;
  return cursor_ <= nvars_ ? cursor_ : 0;
}

SatStatus SolverSession::solve(const std::vector<int>& assumptions) {
  cancel_until(0);
  if (!ok_) return SatStatus::Unsat;
  for (int lit : assumptions) {
    int v = lit > 0 ? lit : -lit;
    if (v < 1 || v > nvars_)
      throw DomainError("assumption literal out of range");
  }

  std::int64_t conflicts_here = 0;
  std::vector<int> learnt;
  for (;;) {
    int confl = propagate();
    if (confl >= 0) {
      if (decision_level() == 0) {
        ok_ = false;
        return SatStatus::Unsat;
      }
      ++total_conflicts_;
      if (++conflicts_here > budget_) {
        cancel_until(0);
        throw BudgetError("conflict budget exceeded (" +
                          std::to_string(budget_) + ")");
      }
      int bjlevel = 0;
      analyze(confl, learnt, bjlevel);
      cancel_until(bjlevel);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int id = static_cast<int>(clauses_.size());
        watches_[lit_index(learnt[0])].push_back(id);
        watches_[lit_index(learnt[1])].push_back(id);
        clauses_.push_back(learnt);
        enqueue(learnt[0], id);
      }
      continue;
    }
    if (decision_level() < static_cast<int>(assumptions.size())) {
      int p = assumptions[static_cast<std::size_t>(decision_level())];
      int v = lit_value(p);
      if (v == 0) return SatStatus::Unsat;  // under these assumptions
      new_level();
      if (v == -1) enqueue(p, -1);
      continue;
    }
    if (trail_.size() == static_cast<std::size_t>(nvars_))
      return SatStatus::Sat;
    int var = next_unassigned();
    new_level();
    enqueue(phase_[var] ? var : -var, -1);
  }
}

bool SolverSession::model_value(int var) const { return value_[var] == 1; }

void SolverSession::set_phase(int var, bool value) {
  if (var < 1 || var > nvars_) throw DomainError("phase variable out of range");
  phase_[var] = value ? 1 : 0;
}

namespace {

SatResult finish(const CnfFormula& cnf, SolverSession& session,
                 SatStatus status, std::vector<VarName> ignored) {
  SatResult r;
  r.status = status;
  r.ignored_assumptions = std::move(ignored);
  if (status == SatStatus::Sat)
    for (const auto& [name, idx] : cnf.origin_map)
      r.model.emplace(name, session.model_value(idx));
  return r;
}

}  // namespace

SatResult solve(const Formula& f, std::int64_t conflict_budget) {
  CnfFormula cnf = tseitin(f);
  SolverSession session(cnf, conflict_budget);
  return finish(cnf, session, session.solve(), {});
}

SatResult solve_assuming(const Formula& f, const PartialAssignment& assumptions,
                         std::int64_t conflict_budget) {
  CnfFormula cnf = tseitin(f);
  SolverSession session(cnf, conflict_budget);
  std::vector<int> lits;
  std::vector<VarName> ignored;
  for (const auto& [name, val] : assumptions) {
    auto it = cnf.origin_map.find(name);
    if (it == cnf.origin_map.end())
      ignored.push_back(name);
    else
      lits.push_back(val ? it->second : -it->second);
  }
  return finish(cnf, session, session.solve(lits), std::move(ignored));
}

}  // namespace bblab
