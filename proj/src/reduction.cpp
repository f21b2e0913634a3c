#include "bblab/reduction.hpp"

#include <map>
#include <array>
#include <sstream>
#include <unordered_map>

namespace bblab {

namespace {

constexpr char kSymbols[] = {'0', '1', '_'};

// Interns variable and literal nodes so the tableau AST shares leaves.
class LiteralPool {
 public:
  Formula lit(const std::string& name, bool positive) {
    auto& slot = positive ? pos_[name] : neg_[name];
    if (!slot) {
      Formula f = Formula::literal(VarName::freevar(name), positive);
      slot = std::make_unique<Formula>(std::move(f));
    }
    return *slot;
  }

 private:
  std::map<std::string, std::unique_ptr<Formula>> pos_, neg_;
};

std::string cell_var(long long t, long long c, char s) {
  std::ostringstream o;
  o << 't' << t << 'c' << c << 's' << s;
  return o.str();
}

std::string head_var(long long t, long long c) {
  std::ostringstream o;
  o << 't' << t << 'h' << c;
  return o.str();
}

std::string state_var(long long t, const std::string& q) {
  std::ostringstream o;
  o << 't' << t << 'q' << q;
  return o.str();
}

Formula clause_of(std::vector<Formula> lits) {
  if (lits.size() == 1) return lits.front();
  return Formula::disj(std::move(lits));
}

}  // namespace

Formula reduce_base(const MachineDescription& m, const std::string& x,
                    const TableauBudget& budget) {
  validate_bits(x);
  const long long T = clock_bound(m, x.size());
  if (T > budget.max_steps)
    throw BudgetError("tableau step bound " + std::to_string(T) +
                      " exceeds budget " + std::to_string(budget.max_steps));

  LiteralPool pool;
  std::vector<Formula> clauses;
  const auto& states = m.states();

  // Exactly-one constraints: machine state per step.
  for (long long t = 0; t <= T; ++t) {
    std::vector<Formula> alo;
    for (const auto& q : states) alo.push_back(pool.lit(state_var(t, q), true));
    clauses.push_back(clause_of(std::move(alo)));
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i + 1; j < states.size(); ++j)
        clauses.push_back(Formula::disj({pool.lit(state_var(t, states[i]), false),
                                         pool.lit(state_var(t, states[j]), false)}));
  }
  // Exactly-one head position per step.
  for (long long t = 0; t <= T; ++t) {
    std::vector<Formula> alo;
    for (long long c = 0; c <= T; ++c) alo.push_back(pool.lit(head_var(t, c), true));
    clauses.push_back(clause_of(std::move(alo)));
    for (long long i = 0; i <= T; ++i)
      for (long long j = i + 1; j <= T; ++j)
        clauses.push_back(Formula::disj({pool.lit(head_var(t, i), false),
                                         pool.lit(head_var(t, j), false)}));
  }
  // Exactly-one symbol per cell per step.
  for (long long t = 0; t <= T; ++t)
    for (long long c = 0; c <= T; ++c) {
      std::vector<Formula> alo;
      for (char s : kSymbols) alo.push_back(pool.lit(cell_var(t, c, s), true));
      clauses.push_back(clause_of(std::move(alo)));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          clauses.push_back(
              Formula::disj({pool.lit(cell_var(t, c, kSymbols[i]), false),
                             pool.lit(cell_var(t, c, kSymbols[j]), false)}));
    }

  // Step 0: start state, head on cell 0, x written on the tape.
  clauses.push_back(pool.lit(state_var(0, m.start()), true));
  clauses.push_back(pool.lit(head_var(0, 0), true));
  for (long long c = 0; c <= T; ++c) {
    char s = c < static_cast<long long>(x.size()) ? x[static_cast<std::size_t>(c)] : '_';
    clauses.push_back(pool.lit(cell_var(0, c, s), true));
  }

  // Transition consistency.  For each possible (state, head, symbol) at step
  // t, some applicable rule must describe step t+1; the accept state behaves
  // as if it had a stay-put self-loop, and a configuration with no
  // applicable rule cannot occur before the final step.  The implication
  //   guard -> OR over rules (state' ∧ cell' ∧ head')
  // is distributed into clauses by picking one conjunct per rule.
  for (long long t = 0; t < T; ++t)
    for (long long c = 0; c <= T; ++c)
      for (const auto& q : states)
        for (char s : kSymbols) {
          std::vector<Transition> rules;
          if (q == m.accept())
            rules.push_back(Transition{q, s, q, s, 'S'});
          else
            rules = m.successors(q, s);
          // Each rule contributes its successor triple; rules moving off the
          // tape are dropped.
          std::vector<std::array<Formula, 3>> cases;
          for (const Transition& r : rules) {
            long long head = c;
            if (r.move == 'L') --head;
            if (r.move == 'R') ++head;
            if (head < 0 || head > T) continue;
            cases.push_back({pool.lit(state_var(t + 1, r.to), true),
                             pool.lit(cell_var(t + 1, c, r.write), true),
                             pool.lit(head_var(t + 1, head), true)});
          }
          std::vector<Formula> guard = {pool.lit(state_var(t, q), false),
                                        pool.lit(head_var(t, c), false),
                                        pool.lit(cell_var(t, c, s), false)};
          if (cases.empty()) {
            clauses.push_back(clause_of(std::move(guard)));
            continue;
          }
          // Odometer over one conjunct choice per case.
          std::vector<int> pick(cases.size(), 0);
          for (;;) {
            std::vector<Formula> lits = guard;
            for (std::size_t i = 0; i < cases.size(); ++i)
              lits.push_back(cases[i][static_cast<std::size_t>(pick[i])]);
            clauses.push_back(clause_of(std::move(lits)));
            std::size_t d = cases.size();
            while (d > 0 && pick[d - 1] == 2) pick[--d] = 0;
            if (d == 0) break;
            ++pick[d - 1];
          }
        }

  // Frame axioms: a cell may only change under the head.
  for (long long t = 0; t < T; ++t)
    for (long long c = 0; c <= T; ++c)
      for (char s : kSymbols)
        for (char s2 : kSymbols) {
          if (s == s2) continue;
          clauses.push_back(Formula::disj({pool.lit(cell_var(t, c, s), false),
                                           pool.lit(cell_var(t + 1, c, s2), false),
                                           pool.lit(head_var(t, c), true)}));
        }

  // Acceptance: the accept state is reached at some step.
  std::vector<Formula> acc;
  for (long long t = 0; t <= T; ++t)
    acc.push_back(pool.lit(state_var(t, m.accept()), true));
  clauses.push_back(clause_of(std::move(acc)));

  return Formula::conj(std::move(clauses));
}

namespace {

Formula rename_rec(const Formula& f, const std::map<VarName, Formula>& repl,
                   std::unordered_map<const void*, Formula>& memo) {
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;
  Formula out = [&]() -> Formula {
    switch (f.kind()) {
      case Formula::Kind::Var:
        return repl.at(f.name());
      case Formula::Kind::Not:
        return Formula::negate(rename_rec(f.child(0), repl, memo));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> kids;
        kids.reserve(f.children().size());
        for (const Formula& c : f.children())
          kids.push_back(rename_rec(c, repl, memo));
        return f.kind() == Formula::Kind::And ? Formula::conj(std::move(kids))
                                              : Formula::disj(std::move(kids));
      }
    }
    throw DomainError("corrupt formula node");
  }();
  memo.emplace(f.id(), out);
  return out;
}

}  // namespace

std::pair<Formula, long> rename_vars(const Formula& f, const MachineTag& tag) {
  std::set<VarName> names = vars(f);
  std::map<VarName, Formula> repl;
  long rank = 0;
  for (const VarName& v : names) {
    if (v.kind() == VarName::Kind::Tagged)
      throw DomainError("rename_vars: formula already contains tagged names");
    repl.emplace(v, Formula::var(VarName::tagged(tag.text, ++rank)));
  }
  std::unordered_map<const void*, Formula> memo;
  return {rename_rec(f, repl, memo), rank};
}

Formula encode_input_block(const MachineTag& tag, long p, const std::string& x) {
  validate_bits(x);
  VarName v = VarName::tagged(tag.text, p + 1);
  std::vector<Formula> disjuncts;
  disjuncts.reserve(2 + x.size());
  disjuncts.push_back(Formula::literal(v, false));
  disjuncts.push_back(Formula::literal(v, true));
  for (char bit : x) disjuncts.push_back(Formula::literal(v, bit == '1'));
  return Formula::disj(std::move(disjuncts));
}

ReductionArtifact reduce(const MachineDescription& m, const std::string& x,
                         const TableauBudget& budget) {
  MachineTag tag = canonical_tag(m);
  auto [renamed, p] = rename_vars(reduce_base(m, x, budget), tag);
  Formula block = encode_input_block(tag, p, x);
  return ReductionArtifact{Formula::conj({std::move(renamed), std::move(block)}),
                           std::move(tag), x, p};
}

namespace {

// Literal of a single variable: (var v) or (not (var v)).
bool literal_shape(const Formula& f, VarName* name, bool* positive) {
  if (f.kind() == Formula::Kind::Var) {
    *name = f.name();
    *positive = true;
    return true;
  }
  if (f.kind() == Formula::Kind::Not &&
      f.child(0).kind() == Formula::Kind::Var) {
    *name = f.child(0).name();
    *positive = false;
    return true;
  }
  return false;
}

const InversionResult kJunk{MachineTag{""}, ""};

}  // namespace

InversionResult invert(const Formula& f) {
  if (f.kind() != Formula::Kind::And || f.children().size() != 2) return kJunk;
  const Formula& a = f.child(0);
  const Formula& b = f.child(1);
  if (b.kind() != Formula::Kind::Or) return kJunk;
  const auto& disjuncts = b.children();

  // The block: all disjuncts are literals of one tagged variable, opening
  // with ¬v then v; the rest spell the input.
  VarName v = VarName::freevar("a");
  bool pos = false;
  if (!literal_shape(disjuncts[0], &v, &pos) || pos) return kJunk;
  if (v.kind() != VarName::Kind::Tagged) return kJunk;
  std::string input;
  for (std::size_t i = 1; i < disjuncts.size(); ++i) {
    VarName u = VarName::freevar("a");
    if (!literal_shape(disjuncts[i], &u, &pos) || u != v) return kJunk;
    if (i == 1) {
      if (!pos) return kJunk;
    } else {
      input += pos ? '1' : '0';
    }
  }

  // The tableau part: every variable tagged, all with the block's tag.
  for (const VarName& u : vars(a))
    if (u.kind() != VarName::Kind::Tagged || u.tag() != v.tag()) return kJunk;

  MachineTag tag{v.tag()};
  try {
    parse_tag(tag);
  } catch (const ParseError&) {
    return kJunk;
  }
  return InversionResult{std::move(tag), std::move(input)};
}

std::string artifact_metadata(const ReductionArtifact& artifact) {
  std::ostringstream out;
  out << "machine_tag " << artifact.machine_tag.text << '\n'
      << "input " << artifact.input << '\n'
      << "p " << artifact.p << '\n';
  return out.str();
}

}  // namespace bblab
