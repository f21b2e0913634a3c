#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bblab/error.hpp"

namespace bblab {

// One nondeterministic Turing machine rule: in state `from` reading `read`,
// write `write`, move the head (L/R/S) and enter `to`.  Symbols range over
// the fixed worktape alphabet {0, 1, _} ('_' is blank).
struct Transition {
  std::string from;
  char read = '_';
  std::string to;
  char write = '_';
  char move = 'S';

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.from == b.from && a.read == b.read && a.to == b.to &&
           a.write == b.write && a.move == b.move;
  }
  friend bool operator<(const Transition& a, const Transition& b);
};

// A clocked nondeterministic machine over input alphabet {0,1}.  The clock
// exponent e bounds every run on input x to |x|^e + e steps.  The accept
// state has no outgoing transitions.  Stored canonically: states and
// transitions sorted, duplicates removed.
class MachineDescription {
 public:
  static MachineDescription create(std::vector<std::string> states,
                                   std::string start, std::string accept,
                                   long clock_exponent,
                                   std::vector<Transition> transitions);

  const std::vector<std::string>& states() const { return states_; }
  const std::string& start() const { return start_; }
  const std::string& accept() const { return accept_; }
  long clock_exponent() const { return clock_exponent_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  // Rules applicable in `state` reading `symbol`, in canonical order.
  std::vector<Transition> successors(const std::string& state,
                                     char symbol) const;

  friend bool operator==(const MachineDescription& a,
                         const MachineDescription& b) {
    return a.states_ == b.states_ && a.start_ == b.start_ &&
           a.accept_ == b.accept_ && a.clock_exponent_ == b.clock_exponent_ &&
           a.transitions_ == b.transitions_;
  }

 private:
  MachineDescription() = default;
  std::vector<std::string> states_;
  std::string start_;
  std::string accept_;
  long clock_exponent_ = 1;
  std::vector<Transition> transitions_;
};

// Canonical machine identifier.  The text embeds the whole description
// (clock, sorted states, start, accept, sorted rules) in a single token that
// is safe inside tagged variable names, so the description can be recovered
// from any variable that carries the tag.
struct MachineTag {
  std::string text;

  friend bool operator==(const MachineTag& a, const MachineTag& b) {
    return a.text == b.text;
  }
  friend bool operator!=(const MachineTag& a, const MachineTag& b) {
    return !(a == b);
  }
  friend bool operator<(const MachineTag& a, const MachineTag& b) {
    return a.text < b.text;
  }
};

MachineTag canonical_tag(const MachineDescription& m);
MachineDescription parse_tag(const MachineTag& tag);

// Machine file format (.tm): one directive per line, '#' starts a comment.
//   state <name>        declare a state (repeatable)
//   start <name>
//   accept <name>
//   clock <e>
//   trans <from> <sym> -> <to> <sym> <L|R|S>
MachineDescription parse_tm(std::string_view text);
std::string serialize_tm(const MachineDescription& m);

// Clock bound |x|^e + e for inputs of length n; throws BudgetError when it
// would overflow the desk-scale range.
long long clock_bound(const MachineDescription& m, std::size_t n);

struct SimulationBudget {
  std::size_t max_configs = 1'000'000;
};

// Runs every computation path for min(path length, |x|^e + e) steps,
// deduplicating configurations, and reports whether some path reaches the
// accept state within the bound.  The tape is one-way infinite but a clocked
// run touches at most clock_bound + 1 cells; moving left off cell 0 or right
// past the bound kills the path.
bool accepts(const MachineDescription& m, const std::string& input,
             const SimulationBudget& budget = {});

// Validates that a string is over {0,1}; returns it, throws ParseError.
const std::string& validate_bits(const std::string& bits);

}  // namespace bblab
