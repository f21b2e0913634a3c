#include "bblab/machine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace bblab {

namespace {


bool is_state_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_state_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_state_char);
}

bool is_symbol(char c) { return c == '0' || c == '1' || c == '_'; }

bool is_move(char c) { return c == 'L' || c == 'R' || c == 'S'; }

}  // namespace

bool operator<(const Transition& a, const Transition& b) {
  return std::tie(a.from, a.read, a.to, a.write, a.move) <
         std::tie(b.from, b.read, b.to, b.write, b.move);
}

MachineDescription MachineDescription::create(
    std::vector<std::string> states, std::string start, std::string accept,
    long clock_exponent, std::vector<Transition> transitions) {
  if (states.empty()) throw DomainError("machine needs at least one state");
  for (const auto& s : states)
    if (!is_state_name(s))
      throw DomainError("bad state name '" + s + "' (use [a-z0-9_]+)");
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  auto declared = [&](const std::string& s) {
    return std::binary_search(states.begin(), states.end(), s);
  };
  if (!declared(start)) throw DomainError("start state '" + start + "' not declared");
  if (!declared(accept))
    throw DomainError("accept state '" + accept + "' not declared");
  if (clock_exponent < 1) throw DomainError("clock exponent must be >= 1");
  for (const auto& t : transitions) {
    if (!declared(t.from) || !declared(t.to))
      throw DomainError("transition uses undeclared state '" +
                        (declared(t.from) ? t.to : t.from) + "'");
    if (!is_symbol(t.read) || !is_symbol(t.write))
      throw DomainError("transition symbol must be 0, 1 or _");
    if (!is_move(t.move)) throw DomainError("transition move must be L, R or S");
    if (t.from == accept)
      throw DomainError("accept state must have no outgoing transitions");
  }
  std::sort(transitions.begin(), transitions.end());
  transitions.erase(std::unique(transitions.begin(), transitions.end()),
                    transitions.end());

  MachineDescription m;
  m.states_ = std::move(states);
  m.start_ = std::move(start);
  m.accept_ = std::move(accept);
  m.clock_exponent_ = clock_exponent;
  m.transitions_ = std::move(transitions);
  return m;
}

std::vector<Transition> MachineDescription::successors(const std::string& state,
                                                       char symbol) const {
  std::vector<Transition> out;
  for (const auto& t : transitions_)
    if (t.from == state && t.read == symbol) out.push_back(t);
  return out;
}

MachineTag canonical_tag(const MachineDescription& m) {
  std::ostringstream out;
  out << 'e' << m.clock_exponent() << ':';
  for (std::size_t i = 0; i < m.states().size(); ++i) {
    if (i) out << '.';
    out << m.states()[i];
  }
  out << ':' << m.start() << ':' << m.accept() << ':';
  for (std::size_t i = 0; i < m.transitions().size(); ++i) {
    const Transition& t = m.transitions()[i];
    if (i) out << '|';
    out << t.from << '.' << t.read << '.' << t.to << '.' << t.write << '.'
        << t.move;
  }
  return MachineTag{out.str()};
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

}  // namespace

MachineDescription parse_tag(const MachineTag& tag) {
  const std::string& s = tag.text;
  std::vector<std::string> parts = split(s, ':');
  if (parts.size() != 5 || parts[0].size() < 2 || parts[0][0] != 'e')
    throw ParseError("malformed machine tag '" + s + "'");
  long e = 0;
  for (std::size_t i = 1; i < parts[0].size(); ++i) {
    char c = parts[0][i];
    if (c < '0' || c > '9' || parts[0].size() > 10)
      throw ParseError("bad clock exponent in tag '" + s + "'");
    e = e * 10 + (c - '0');
  }
  std::vector<std::string> states = split(parts[1], '.');
  std::vector<Transition> transitions;
  if (!parts[4].empty()) {
    for (const std::string& item : split(parts[4], '|')) {
      std::vector<std::string> f = split(item, '.');
      if (f.size() != 5 || f[1].size() != 1 || f[3].size() != 1 ||
          f[4].size() != 1)
        throw ParseError("bad transition '" + item + "' in tag");
      transitions.push_back(Transition{f[0], f[1][0], f[2], f[3][0], f[4][0]});
    }
  }
  try {
    return MachineDescription::create(std::move(states), parts[2], parts[3], e,
                                      std::move(transitions));
  } catch (const DomainError& err) {
    throw ParseError(std::string("invalid machine tag: ") + err.what());
  }
}

MachineDescription parse_tm(std::string_view text) {
  std::vector<std::string> states;
  std::string start, accept;
  long clock = 0;
  bool has_start = false, has_accept = false, has_clock = false;
  std::vector<Transition> transitions;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string directive;
    if (!(ls >> directive)) continue;
    auto fail = [&](const std::string& why) {
      throw ParseError("machine file line " + std::to_string(lineno) + ": " +
                       why);
    };
    auto expect_end = [&] {
      std::string extra;
      if (ls >> extra) fail("unexpected token '" + extra + "'");
    };
    if (directive == "state") {
      std::string name;
      if (!(ls >> name)) fail("missing state name");
      states.push_back(name);
      expect_end();
    } else if (directive == "start") {
      if (!(ls >> start)) fail("missing start state");
      has_start = true;
      expect_end();
    } else if (directive == "accept") {
      if (!(ls >> accept)) fail("missing accept state");
      has_accept = true;
      expect_end();
    } else if (directive == "clock") {
      if (!(ls >> clock)) fail("missing clock exponent");
      has_clock = true;
      expect_end();
    } else if (directive == "trans") {
      std::string from, arrow, to, rd, wr, mv;
      if (!(ls >> from >> rd >> arrow >> to >> wr >> mv) || arrow != "->")
        fail("expected 'trans <state> <sym> -> <state> <sym> <L|R|S>'");
      if (rd.size() != 1 || wr.size() != 1 || mv.size() != 1)
        fail("symbols and moves are single characters");
      transitions.push_back(Transition{from, rd[0], to, wr[0], mv[0]});
      expect_end();
    } else {
      fail("unknown directive '" + directive + "'");
    }
  }
  if (!has_start) throw ParseError("machine file: missing 'start'");
  if (!has_accept) throw ParseError("machine file: missing 'accept'");
  if (!has_clock) throw ParseError("machine file: missing 'clock'");
  try {
    return MachineDescription::create(std::move(states), start, accept, clock,
                                      std::move(transitions));
  } catch (const DomainError& err) {
    throw ParseError(std::string("invalid machine: ") + err.what());
  }
}

std::string serialize_tm(const MachineDescription& m) {
  std::ostringstream out;
  for (const auto& s : m.states()) out << "state " << s << '\n';
  out << "start " << m.start() << '\n';
  out << "accept " << m.accept() << '\n';
  out << "clock " << m.clock_exponent() << '\n';
  for (const auto& t : m.transitions())
    out << "trans " << t.from << ' ' << t.read << " -> " << t.to << ' '
        << t.write << ' ' << t.move << '\n';
  return out.str();
}

long long clock_bound(const MachineDescription& m, std::size_t n) {
  constexpr long long kMax = 1'000'000'000'000LL;
  long long p = 1;
  for (long i = 0; i < m.clock_exponent(); ++i) {
    p *= static_cast<long long>(n);
    if (p > kMax) throw BudgetError("clock bound overflow");
    if (n == 0) break;
  }
  return p + m.clock_exponent();
}

const std::string& validate_bits(const std::string& bits) {
  for (char c : bits)
    if (c != '0' && c != '1')
      throw ParseError("input must be a string over {0,1}: '" + bits + "'");
  return bits;
}

bool accepts(const MachineDescription& m, const std::string& input,
             const SimulationBudget& budget) {
  validate_bits(input);
  const long long bound = clock_bound(m, input.size());
  if (m.start() == m.accept()) return true;
  if (bound > static_cast<long long>(budget.max_configs))
    throw BudgetError("simulation clock bound exceeds configuration budget");
  const std::size_t tape_len = static_cast<std::size_t>(bound) + 1;

  struct Config {
    std::string state;
    std::size_t head;
    std::string tape;
  };
  std::string tape0(tape_len, '_');
  std::copy(input.begin(), input.end(), tape0.begin());

  auto key = [](const Config& c) {
    return c.state + '|' + std::to_string(c.head) + '|' + c.tape;
  };

  std::deque<std::pair<Config, long long>> frontier;
  std::unordered_set<std::string> visited;
  Config start{m.start(), 0, std::move(tape0)};
  visited.insert(key(start));
  frontier.emplace_back(std::move(start), 0);

  while (!frontier.empty()) {
    auto [cfg, t] = std::move(frontier.front());
    frontier.pop_front();
    if (t >= bound) continue;
    for (const Transition& tr : m.successors(cfg.state, cfg.tape[cfg.head])) {
      long long head = static_cast<long long>(cfg.head);
      if (tr.move == 'L') --head;
      if (tr.move == 'R') ++head;
      if (head < 0 || head >= static_cast<long long>(tape_len)) continue;
      Config next{tr.to, static_cast<std::size_t>(head), cfg.tape};
      next.tape[cfg.head] = tr.write;
      if (next.state == m.accept()) return true;
      if (visited.size() >= budget.max_configs)
        throw BudgetError("simulation configuration budget exceeded");
      if (visited.insert(key(next)).second)
        frontier.emplace_back(std::move(next), t + 1);
    }
  }
  return false;
}

}  // namespace bblab
