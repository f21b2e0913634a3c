#include "bblab/backbone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bblab/error.hpp"

namespace bblab {

namespace {

// Bit 1: some model assigns false.  Bit 2: some model assigns true.
constexpr int kSeenFalse = 1;
constexpr int kSeenTrue = 2;
constexpr int kSeenBoth = 3;

// Exact summary of the model space of one subformula: satisfiability plus,
// per variable of the subformula, which truth values appear across models.
struct Profile {
  bool sat = false;
  std::map<VarName, int> mask;
};

Profile analyze(const Formula& f);

std::vector<VarName> sorted_vars(const Formula& f) {
  auto vs = vars(f);
  return std::vector<VarName>(vs.begin(), vs.end());
}

// Occurrence count per variable, counting each shared subterm once.
void count_occurrences(const Formula& f, std::map<VarName, std::size_t>& out) {
  std::unordered_set<const void*> visited;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!visited.insert(g.id()).second) continue;
    if (g.kind() == Formula::Kind::Var) {
      ++out[g.name()];
    } else {
      for (const auto& c : g.children()) stack.push_back(c);
    }
  }
}

struct EnumCtx {
  std::map<VarName, int> mask;
  std::size_t settled = 0;  // variables whose mask reached kSeenBoth
  bool sat = false;

  void add(const VarName& v, int bits) {
    int& m = mask.at(v);
    if (m == kSeenBoth) return;
    int next = m | bits;
    if (next != m) {
      m = next;
      if (next == kSeenBoth) ++settled;
    }
  }
  bool complete() const { return sat && settled == mask.size(); }
};

void record_leaf(EnumCtx& ctx, const PartialAssignment& assigned) {
  ctx.sat = true;
  for (auto& [v, m] : ctx.mask) {
    (void)m;
    auto it = assigned.find(v);
    if (it == assigned.end()) {
      ctx.add(v, kSeenBoth);
    } else {
      ctx.add(v, it->second ? kSeenTrue : kSeenFalse);
    }
  }
}

// Walks the conjunction closure of f (nested ands flattened, left to right),
// collecting forced literal values and the leftmost non-literal conjunct.
// Returns false on contradictory forced values.
bool conj_view(const Formula& f, PartialAssignment& units,
               const Formula** first_clause) {
  if (f.kind() != Formula::Kind::And) return true;
  std::vector<std::pair<const Formula*, std::size_t>> walk{{&f, 0}};
  while (!walk.empty()) {
    auto& [node, next] = walk.back();
    if (next >= node->children().size()) {
      walk.pop_back();
      continue;
    }
    const Formula& c = node->child(next++);
    if (c.kind() == Formula::Kind::And) {
      walk.push_back({&c, 0});
      continue;
    }
    VarName v = VarName::freevar("t");
    bool val = true;
    if (c.kind() == Formula::Kind::Var) {
      v = c.name();
    } else if (c.kind() == Formula::Kind::Not &&
               c.child(0).kind() == Formula::Kind::Var) {
      v = c.child(0).name();
      val = false;
    } else {
      if (*first_clause == nullptr) *first_clause = &c;
      continue;
    }
    auto [it, fresh] = units.emplace(v, val);
    if (!fresh && it->second != val) return false;
  }
  return true;
}

// Leftmost variable of a clause, following the left spine.
const VarName& leftmost_var(const Formula& f) {
  const Formula* g = &f;
  while (g->kind() != Formula::Kind::Var) g = &g->child(0);
  return g->name();
}

void enum_rec(const FormulaOrBool& g, PartialAssignment& assigned,
              EnumCtx& ctx) {
  if (ctx.complete()) return;
  if (std::holds_alternative<bool>(g)) {
    if (std::get<bool>(g)) record_leaf(ctx, assigned);
    return;
  }
  const Formula& f = std::get<Formula>(g);

  // Forced values: literal conjuncts anywhere in the nested conjunction.
  PartialAssignment units;
  const Formula* first_clause = nullptr;
  if (!conj_view(f, units, &first_clause)) return;
  if (!units.empty()) {
    FormulaOrBool next = substitute(f, units);
    for (const auto& [v, b] : units) assigned.emplace(v, b);
    enum_rec(next, assigned, ctx);
    for (const auto& [v, b] : units) {
      (void)b;
      assigned.erase(v);
    }
    return;
  }

  // Branch on the leftmost unresolved conjunct's first variable; they come
  // in construction order, so this follows the formula's own structure.
  // Anything else falls back to the most frequent variable.
  VarName pick = VarName::freevar("t");
  if (first_clause != nullptr) {
    pick = leftmost_var(*first_clause);
  } else {
    std::map<VarName, std::size_t> occ;
    count_occurrences(f, occ);
    pick = occ.begin()->first;
    std::size_t best = occ.begin()->second;
    for (const auto& [v, n] : occ) {
      if (n > best) {
        best = n;
        pick = v;
      }
    }
  }
  for (bool val : {false, true}) {
    if (ctx.complete()) return;
    PartialAssignment one{{pick, val}};
    FormulaOrBool next = substitute(f, one);
    assigned.emplace(pick, val);
    enum_rec(next, assigned, ctx);
    assigned.erase(pick);
  }
}

Profile enumerate_profile(const Formula& f) {
  EnumCtx ctx;
  for (const auto& v : sorted_vars(f)) ctx.mask.emplace(v, 0);
  PartialAssignment assigned;
  enum_rec(FormulaOrBool(f), assigned, ctx);
  Profile p;
  p.sat = ctx.sat;
  if (ctx.sat) p.mask = std::move(ctx.mask);
  return p;
}

// Models of a disjunction are the union of each branch's models extended
// freely over the other branches' variables, so a variable missing from a
// satisfiable branch takes both values there.
Profile analyze_or(const Formula& f) {
  Profile out;
  auto all = sorted_vars(f);
  std::map<VarName, int> acc;
  for (const auto& v : all) acc.emplace(v, 0);
  for (const auto& c : f.children()) {
    Profile sub = analyze(c);
    if (!sub.sat) continue;
    out.sat = true;
    for (auto& [v, m] : acc) {
      auto it = sub.mask.find(v);
      m |= (it == sub.mask.end()) ? kSeenBoth : it->second;
    }
  }
  if (out.sat) out.mask = std::move(acc);
  return out;
}

// Conjunctions split into variable-disjoint groups whose model spaces
// multiply; a single group falls back to enumeration.
Profile analyze_and(const Formula& f) {
  const auto& kids = f.children();
  std::size_t n = kids.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find =
      [&](std::size_t a) -> std::size_t {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  std::map<VarName, std::size_t> owner;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : vars(kids[i])) {
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh) unite(i, it->second);
    }
  }
  std::map<std::size_t, std::vector<Formula>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(kids[i]);

  if (groups.size() == 1) return enumerate_profile(f);

  Profile out;
  out.sat = true;
  for (auto& [root, members] : groups) {
    (void)root;
    Profile sub = members.size() == 1 ? analyze(members.front())
                                      : analyze(Formula::conj(members));
    if (!sub.sat) return Profile{};
    for (const auto& [v, m] : sub.mask) out.mask[v] = m;
  }
  return out;
}

Profile analyze(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Var: {
      Profile p;
      p.sat = true;
      p.mask.emplace(f.name(), kSeenTrue);
      return p;
    }
    case Formula::Kind::Not:
      if (f.child(0).kind() == Formula::Kind::Var) {
        Profile p;
        p.sat = true;
        p.mask.emplace(f.child(0).name(), kSeenFalse);
        return p;
      }
      return enumerate_profile(f);
    case Formula::Kind::Or:
      return analyze_or(f);
    case Formula::Kind::And:
      return analyze_and(f);
  }
  throw Error("unreachable formula kind");
}

}  // namespace

FrozenReport frozen_vars_brute(const Formula& f, std::size_t limit) {
  std::size_t n = numvars(f);
  if (n > limit) {
    std::ostringstream os;
    os << "formula has " << n << " variables, over the exhaustive limit of "
       << limit;
    throw LimitError(os.str());
  }
  Profile p = analyze(f);
  FrozenReport report;
  report.method = FrozenReport::Method::Brute;
  report.satisfiable = p.sat;
  if (p.sat) {
    for (const auto& [v, m] : p.mask) {
      if (m == kSeenTrue) report.frozen.emplace_back(v, true);
      if (m == kSeenFalse) report.frozen.emplace_back(v, false);
    }
  }
  return report;
}

FrozenReport frozen_vars_sat(const Formula& f, std::int64_t conflict_budget) {
  FrozenReport report;
  report.method = FrozenReport::Method::Sat;

  CnfFormula cnf = tseitin(f);
  SolverSession session(cnf, conflict_budget);
  if (session.solve() == SatStatus::Unsat) return report;
  report.satisfiable = true;

  // Reference model fixes the only value each variable could be frozen at.
  std::vector<std::pair<VarName, int>> order(cnf.origin_map.begin(),
                                             cnf.origin_map.end());
  std::map<VarName, bool> reference;
  std::set<VarName> alive;
  for (const auto& [v, idx] : order) {
    reference[v] = session.model_value(idx);
    alive.insert(v);
    // Steer later models away from the reference so one satisfiable flip
    // disagrees on many variables at once and the filter below bites.
    session.set_phase(idx, !reference[v]);
  }

  for (const auto& [v, idx] : order) {
    if (!alive.count(v)) continue;
    bool want = reference[v];
    int assumption = want ? -idx : idx;  // ask for the opposite value
    if (session.solve({assumption}) == SatStatus::Unsat) {
      report.frozen.emplace_back(v, want);
    } else {
      // Every variable the flipped model disagrees on is settled bivalent.
      for (auto it = alive.begin(); it != alive.end();) {
        int j = cnf.origin_map.at(*it);
        if (session.model_value(j) != reference[*it]) {
          it = alive.erase(it);
        } else {
          ++it;
        }
      }
    }
  }
  return report;
}

bool verify_backbone(const Formula& f, const std::vector<VarName>& s,
                     const PartialAssignment& a, std::int64_t conflict_budget) {
  std::set<VarName> sset(s.begin(), s.end());
  if (sset.size() != s.size()) throw DomainError("duplicate variable in set");
  if (a.size() != sset.size())
    throw DomainError("assignment domain differs from the variable set");
  for (const auto& [v, b] : a) {
    (void)b;
    if (!sset.count(v))
      throw DomainError("assignment binds " + v.text() +
                        " which is outside the variable set");
  }
  auto fv = vars(f);
  for (const auto& v : sset) {
    if (!fv.count(v))
      throw DomainError("variable " + v.text() + " does not occur");
  }

  // (i) the restricted formula stays satisfiable
  FormulaOrBool restricted = substitute(f, a);
  if (std::holds_alternative<bool>(restricted)) {
    if (!std::get<bool>(restricted)) return false;
  } else {
    if (!solve(std::get<Formula>(restricted), conflict_budget).sat())
      return false;
  }
  if (a.empty()) return true;

  // (ii) no model escapes the assignment: f and not(agreement) is unsat
  std::vector<Formula> disagree;
  disagree.reserve(a.size());
  for (const auto& [v, b] : a) disagree.push_back(Formula::literal(v, !b));
  Formula escape = disagree.size() == 1 ? disagree.front()
                                        : Formula::disj(disagree);
  return !solve(Formula::conj({f, escape}), conflict_budget).sat();
}

PartialAssignment backbone_value(const Formula& f, const std::vector<VarName>& s,
                                 std::int64_t conflict_budget) {
  auto fv = vars(f);
  for (const auto& v : s) {
    if (!fv.count(v))
      throw DomainError("variable " + v.text() + " does not occur");
  }
  SatResult base = solve(f, conflict_budget);
  if (!base.sat())
    throw NotABackboneError("formula is unsatisfiable, so it has no backbones");
  PartialAssignment a;
  for (const auto& v : s) a[v] = base.model.at(v);
  if (!verify_backbone(f, s, a, conflict_budget))
    throw NotABackboneError("the variable set is not a backbone: some listed "
                            "variable is not frozen");
  return a;
}

std::string format_report(const FrozenReport& report) {
  std::ostringstream os;
  os << (report.satisfiable ? "SAT" : "UNSAT") << '\n';
  for (const auto& [v, b] : report.frozen)
    os << "frozen " << v.text() << ' ' << (b ? '1' : '0') << '\n';
  return os.str();
}

}  // namespace bblab
