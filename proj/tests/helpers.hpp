#pragma once

// Shared test scaffolding: independent reference implementations the suites
// compare the library against, plus a seeded random formula generator.  The
// oracles here are deliberately naive; they define what "correct" means and
// must stay free of any library cleverness.

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bblab/formula.hpp"
#include "bblab/machine.hpp"

namespace testing {

// Plain recursive evaluation, no sharing tricks.
inline bool eval_oracle(const bblab::Formula& f,
                        const bblab::PartialAssignment& a) {
  using K = bblab::Formula::Kind;
  switch (f.kind()) {
    case K::Var:
      return a.at(f.name());
    case K::Not:
      return !eval_oracle(f.child(0), a);
    case K::And:
      for (const auto& c : f.children())
        if (!eval_oracle(c, a)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (eval_oracle(c, a)) return true;
      return false;
  }
  return false;
}

inline void collect_vars(const bblab::Formula& f,
                         std::set<bblab::VarName>& out) {
  if (f.kind() == bblab::Formula::Kind::Var) {
    out.insert(f.name());
    return;
  }
  for (const auto& c : f.children()) collect_vars(c, out);
}

// Every satisfying total assignment, in increasing binary-counter order
// over the sorted variable list (false = 0).
inline std::vector<bblab::PartialAssignment> all_models(
    const bblab::Formula& f) {
  std::set<bblab::VarName> vs;
  collect_vars(f, vs);
  std::vector<bblab::VarName> order(vs.begin(), vs.end());
  if (order.size() > 24) throw std::runtime_error("all_models: too many vars");
  std::vector<bblab::PartialAssignment> models;
  for (std::uint32_t bits = 0; bits < (1u << order.size()); ++bits) {
    bblab::PartialAssignment a;
    for (std::size_t i = 0; i < order.size(); ++i)
      a[order[i]] = (bits >> i) & 1;
    if (eval_oracle(f, a)) models.push_back(std::move(a));
  }
  return models;
}

// Frozen variables by flat truth-table scan: the ground truth the two
// library routes are checked against.
struct FlatFrozen {
  bool satisfiable = false;
  std::vector<std::pair<bblab::VarName, bool>> frozen;  // sorted by name
};

inline FlatFrozen flat_frozen(const bblab::Formula& f) {
  FlatFrozen r;
  std::map<bblab::VarName, int> seen;  // 1 false, 2 true, 3 both
  for (const auto& m : all_models(f)) {
    r.satisfiable = true;
    for (const auto& [v, b] : m) seen[v] |= b ? 2 : 1;
  }
  if (r.satisfiable)
    for (const auto& [v, mask] : seen)
      if (mask != 3) r.frozen.emplace_back(v, mask == 2);
  return r;
}

// Seeded generator of random formulas over free variables x1..x<pool>.
class FormulaGen {
 public:
  explicit FormulaGen(std::uint64_t seed) : rng_(seed) {}

  bblab::Formula operator()(int var_pool, int max_depth) {
    return gen(var_pool, max_depth);
  }

  bblab::PartialAssignment random_assignment(const std::set<bblab::VarName>& vs) {
    bblab::PartialAssignment a;
    for (const auto& v : vs) a[v] = coin();
    return a;
  }

  bool coin() { return rng_() & 1; }
  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }  // 0..n-1

 private:
  bblab::Formula gen(int pool, int depth) {
    // Leaf odds rise as depth runs out.
    std::uint64_t roll = pick(100);
    if (depth <= 0 || roll < 30) {
      auto v = bblab::VarName::freevar("x" + std::to_string(1 + pick(pool)));
      return bblab::Formula::var(std::move(v));
    }
    if (roll < 50) return bblab::Formula::negate(gen(pool, depth - 1));
    std::size_t arity = 2 + pick(3);
    std::vector<bblab::Formula> kids;
    kids.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) kids.push_back(gen(pool, depth - 1));
    if (roll < 75) return bblab::Formula::conj(std::move(kids));
    return bblab::Formula::disj(std::move(kids));
  }

  std::mt19937_64 rng_;
};

// Linear-scan reference for the sized-family padding width: least m >= 1
// with 100*den*m >= (50*den - num) * (V + 2m).
inline long long scan_m(long long total_vars, long long num, long long den) {
  for (long long m = 1;; ++m) {
    __int128 lhs = (__int128)100 * den * m;
    __int128 rhs = (__int128)(50 * den - num) * (total_vars + 2 * m);
    if (lhs >= rhs) return m;
    if (m > 2'000'000'000LL) throw std::runtime_error("scan_m runaway");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

#ifndef BBLAB_MACHINES_DIR
#error "tests must be compiled with -DBBLAB_MACHINES_DIR=..."
#endif

inline bblab::MachineDescription load_machine(const std::string& name) {
  return bblab::parse_tm(read_file(std::string(BBLAB_MACHINES_DIR) + "/" + name));
}

// The complementary fixture pair used throughout: accepts iff the input is
// nonempty and its last bit is 0 (first machine) / 1 (second).
inline bblab::MachineDescription fixture_last0() {
  return load_machine("lastbit0.tm");
}
inline bblab::MachineDescription fixture_last1() {
  return load_machine("lastbit1.tm");
}

}  // namespace testing
