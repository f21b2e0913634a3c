#pragma once

#include <string>
#include <utility>

#include "bblab/formula.hpp"
#include "bblab/machine.hpp"

namespace bblab {

struct TableauBudget {
  long long max_steps = 64;  // clock bound ceiling for tableau construction
};

// Output of the invertible reduction on (M, x): formula is (A) ∧ (B) where A
// is the renamed tableau formula and B the input-encoding block.  p is the
// number of variables of A; satisfiability of the whole formula is
// equivalent to M accepting x within its clock.
struct ReductionArtifact {
  Formula formula;
  MachineTag machine_tag;
  std::string input;
  long p = 0;
};

// Result of inverting a formula back to a (machine, input) pair.  A formula
// outside the reduction's image decodes to the junk pair (empty tag, "").
struct InversionResult {
  MachineTag tag;
  std::string input;

  bool junk() const { return tag.text.empty(); }
};

// Step-by-step tableau encoding of "M accepts x within |x|^e + e steps" as a
// conjunction of clauses over free variables:
//   t<T>c<C>s<S>  tape cell C holds symbol S after step T ('_' spelled s_)
//   t<T>h<C>      the head sits on cell C after step T
//   t<T>q<STATE>  the machine is in STATE after step T
// Exactly-one constraints, the input row, transition consistency (dead
// configurations excluded, accept made absorbing), frame axioms, and the
// acceptance disjunction, in that order.
Formula reduce_base(const MachineDescription& m, const std::string& x,
                    const TableauBudget& budget = {});

// Renames every variable of f to x[tag,q] where q is the 1-based rank of the
// old name in lexicographic order; returns the renamed formula and the
// variable count p.  f must not already contain tagged names.
std::pair<Formula, long> rename_vars(const Formula& f, const MachineTag& tag);

// The input-encoding block over the single fresh variable v = x[tag,p+1]:
//   (¬v ∨ v ∨ [one literal per bit of x: '1' -> v, '0' -> ¬v])
// Its disjunct count 2 + |x| carries |x|; the first two disjuncts mark the
// block as a block.
Formula encode_input_block(const MachineTag& tag, long p, const std::string& x);

// The full reduction: rename_vars(reduce_base(m, x)) ∧ input block.
// Deterministic: equal (m, x) give bit-identical serializations.
ReductionArtifact reduce(const MachineDescription& m, const std::string& x,
                         const TableauBudget& budget = {});

// Total inverse.  Reads the tag from the conjunct A's variable names and the
// input back off the block's disjuncts.  This is a shallow structural parse:
// it does not check that A actually is a tableau image (membership testing
// recomputes the reduction instead); any structural mismatch — wrong shape,
// mixed tags, an unparseable tag — yields the junk pair.
InversionResult invert(const Formula& f);

// Companion metadata ("machine_tag ...\ninput ...\np ...\n").
std::string artifact_metadata(const ReductionArtifact& artifact);

}  // namespace bblab
