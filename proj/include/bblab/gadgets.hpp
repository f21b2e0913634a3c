#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bblab/formula.hpp"
#include "bblab/machine.hpp"

namespace bblab {

// Exact fraction, used for the slack parameter of the sized family.
struct Rational {
  long long num = 1;
  long long den = 1;
};

enum class GadgetFamily { A3k, Thm3 };

// A pair of machines that decide complementary languages, plus the family
// shape parameter.  Complementarity is checked per input at build time.
struct ConstructionParams {
  GadgetFamily family = GadgetFamily::A3k;
  MachineDescription machine_i;
  MachineDescription machine_j;
  long long k = 1;           // A3k selector width
  Rational epsilon{1, 1};  // Thm3 slack
};

struct GadgetInstance {
  Formula formula;
  std::string input;
  GadgetFamily family = GadgetFamily::A3k;
  long long k_or_m = 0;
  Rational epsilon{1, 1};
  std::size_t left_vars = 0;
  std::size_t right_vars = 0;
  MachineTag tag_i;
  MachineTag tag_j;
};

// Least m >= 1 with m / (total_machine_vars + 2m) >= (50 - epsilon) / 100,
// computed exactly over integers.  Requires 0 < epsilon < 50.
long long compute_m(long long total_machine_vars, const Rational& epsilon);

// (z.1 & ... & z.k & L) | (!z.1 & ... & !z.k & R) where L and R encode the
// two machines running on `input`.  Throws FixtureError unless exactly one
// machine accepts the input.
GadgetInstance build_a3k(const ConstructionParams& params,
                         const std::string& input,
                         const SimulationBudget& budget = {});

// (z.1 & ... & z.m & L) | (!zp.1 & ... & !zp.m & R) with m sized so the
// forced selector block is at least a (50 - epsilon) percent share of the
// variables.  Same complementarity requirement as build_a3k.
GadgetInstance build_thm3(const ConstructionParams& params,
                          const std::string& input,
                          const SimulationBudget& budget = {});

// The selector variables, whose forced value alone answers membership.
// Only the A3k family keeps one fixed set across both branches.
std::vector<VarName> f_backbone(const GadgetInstance& instance);

// Total check that `f` is byte-identical to some instance this family and
// parameter set can produce.  Never reports a near miss as a member.
bool membership_test(const ConstructionParams& params, const Formula& f,
                     const SimulationBudget& budget = {});

// Resolves a value query over a designated variable set of a formula.
using BackboneValueOracle = std::function<PartialAssignment(
    const Formula&, const std::vector<VarName>&)>;

// Decides input membership in the first machine's language by reading the
// selector backbone value, never by running the machine.  All-true means
// member, all-false means non-member; anything else throws
// InconsistentOracleError.  A3k only.
bool decide_via_backbone_value(const ConstructionParams& params,
                               const std::string& input,
                               const BackboneValueOracle& oracle = {});

enum class BackboneSide { Left, Right, Impossible };

// Which branch a backbone set certifies: unprimed selectors mean the left
// machine accepted, primed ones the right.  A set mentioning both kinds, or
// neither, cannot be a maximum backbone of a well-formed instance, so it
// reports Impossible rather than guessing.
BackboneSide classify_backbone_side(const std::vector<VarName>& backbone_set);

// Line-based sidecar description of an instance.
std::string gadget_metadata(const GadgetInstance& instance);

}  // namespace bblab
