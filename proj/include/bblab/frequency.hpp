#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bblab/gadgets.hpp"

namespace bblab {

// All instances for nonempty inputs of length <= max_input_len, in shortlex
// input order (length first, then binary value).  Selector-set families
// only (A3k); every build revalidates the machine pair on its input.
std::vector<GadgetInstance> enumerate_family(const ConstructionParams& params,
                                             std::size_t max_input_len,
                                             const SimulationBudget& budget = {});

// Heuristics standing in for an algorithm that answers selector-value
// queries.  The first three never look at the formula's models; the last
// one computes the real value and so never errs.
enum class AdapterKind { AllTrue, AllFalse, ParityOfLength, Oracle };

const char* adapter_name(AdapterKind kind);
AdapterKind parse_adapter(const std::string& name);

// Reads the selector set straight off the gadget shape: the leading plain
// z variables of the first branch.  Throws DomainError when the formula is
// not shaped like a two-branch selector gadget.
std::vector<VarName> designated_selectors(const Formula& gadget);

// The adapter's claimed value for the gadget's selector set.
PartialAssignment adapter_claim(AdapterKind kind, const Formula& gadget);

struct TransferRow {
  std::size_t n = 0;          // input length bound
  std::size_t inputs = 0;     // inputs with 1 <= |x| <= n
  std::size_t max_len = 0;    // longest serialized gadget over those inputs
  std::size_t errors_a = 0;   // adapter errors among gadgets of length <= max_len
  std::size_t errors_b = 0;   // wrong membership answers among those inputs
};

// One adapter's error accounting across the family, with the derived
// length-growth fit.  The transfer bound says errors_b can never exceed
// errors_a row by row: a wrong membership answer is always caused by a
// wrong selector value on a gadget that row already counts.
struct DensityProfile {
  AdapterKind adapter = AdapterKind::Oracle;
  std::size_t instances = 0;
  std::vector<TransferRow> rows;
  bool injective = false;       // serialized gadgets pairwise distinct
  bool transfer_holds = false;  // errors_b <= errors_a on every row
  // Least-squares slope of log(max_len) against log(n) over rows with
  // n >= 2, its root-mean-square residual, and the reciprocal slope.
  double fitted_q = 0.0;
  double residual = 0.0;
  double epsilon_hat = 0.0;
};

DensityProfile transfer_check(const ConstructionParams& params,
                              std::size_t max_input_len, AdapterKind kind,
                              const SimulationBudget& budget = {});

// Tab-separated rows with a header line.
std::string render_profile_tsv(const DensityProfile& profile);
// "key value" summary lines.
std::string render_profile_summary(const DensityProfile& profile);

}  // namespace bblab
