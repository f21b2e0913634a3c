#include "bblab/cnf.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <unordered_map>

namespace bblab {

namespace {

// Returns the literal standing for subformula f, creating auxiliary
// variables and defining clauses as needed.  memo keys on node identity so a
// shared subtree is defined once.
int encode(const Formula& f, CnfFormula& cnf,
           std::unordered_map<const void*, int>& memo) {
  auto hit = memo.find(f.id());
  if (hit != memo.end()) return hit->second;

  int lit = 0;
  switch (f.kind()) {
    case Formula::Kind::Var:
      lit = cnf.origin_map.at(f.name());
      break;
    case Formula::Kind::Not:
      lit = -encode(f.child(0), cnf, memo);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<int> kids;
      kids.reserve(f.children().size());
      for (const Formula& c : f.children()) kids.push_back(encode(c, cnf, memo));
      int aux = ++cnf.num_vars;
      const bool is_and = f.kind() == Formula::Kind::And;
      // and: (aux -> k) for each k, (k1 & ... & kn -> aux)
      // or:  (k -> aux) for each k, (aux -> k1 | ... | kn)
      std::vector<int> wide;
      wide.reserve(kids.size() + 1);
      wide.push_back(is_and ? aux : -aux);
      for (int k : kids) {
        cnf.clauses.push_back(is_and ? std::vector<int>{-aux, k}
                                     : std::vector<int>{aux, -k});
        wide.push_back(is_and ? -k : k);
      }
      cnf.clauses.push_back(std::move(wide));
      lit = aux;
      break;
    }
  }
  memo.emplace(f.id(), lit);
  return lit;
}

}  // namespace

CnfFormula tseitin(const Formula& f) {
  CnfFormula cnf;
  for (const VarName& v : vars(f)) cnf.origin_map.emplace(v, ++cnf.num_vars);
  std::unordered_map<const void*, int> memo;
  int root = encode(f, cnf, memo);
  cnf.clauses.push_back({root});
  return cnf;
}

std::string to_dimacs(const CnfFormula& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string origin_map_text(const CnfFormula& cnf) {
  // origin_map is ordered by name; re-sort lines by index for the sidecar.
  std::map<int, const VarName*> by_index;
  for (const auto& [name, idx] : cnf.origin_map) by_index.emplace(idx, &name);
  std::ostringstream out;
  for (const auto& [idx, name] : by_index) out << idx << '\t' << name->text() << '\n';
  return out.str();
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  bool seen_header = false;
  long declared_clauses = -1;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, fmt;
      long nv = 0;
      if (!(hs >> p >> fmt >> nv >> declared_clauses) || fmt != "cnf" || nv < 0)
        throw ParseError("bad DIMACS header: '" + line + "'");
      cnf.num_vars = static_cast<int>(nv);
      seen_header = true;
      continue;
    }
    if (!seen_header) throw ParseError("DIMACS clause before 'p cnf' header");
    std::istringstream ls(line);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(current);
        current.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars)
          throw ParseError("DIMACS literal out of range: " + std::to_string(lit));
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) throw ParseError("bad DIMACS literal in '" + line + "'");
  }
  if (!seen_header) throw ParseError("missing DIMACS header");
  if (!current.empty()) throw ParseError("unterminated DIMACS clause");
  if (declared_clauses >= 0 &&
      static_cast<std::size_t>(declared_clauses) != cnf.clauses.size())
    throw ParseError("DIMACS clause count mismatch");
  return cnf;
}

}  // namespace bblab
