#include "bblab/gadgets.hpp"

#include <sstream>
#include <utility>

#include "bblab/backbone.hpp"
#include "bblab/error.hpp"
#include "bblab/reduction.hpp"

namespace bblab {

namespace {

// Returns whether the left machine accepts; throws unless exactly one does.
bool require_complementary(const ConstructionParams& params,
                           const std::string& input,
                           const SimulationBudget& budget) {
  bool ai = accepts(params.machine_i, input, budget);
  bool aj = accepts(params.machine_j, input, budget);
  if (ai == aj) {
    std::ostringstream os;
    os << "machine pair is not complementary on input \"" << input
       << "\": " << (ai ? "both accept" : "both reject");
    throw FixtureError(os.str());
  }
  return ai;
}

Formula selector_branch(long long count, bool primed, bool positive,
                        const Formula& payload) {
  std::vector<Formula> parts;
  parts.reserve(static_cast<std::size_t>(count) + 1);
  for (long long i = 1; i <= count; ++i)
    parts.push_back(Formula::literal(VarName::zvar(i, primed), positive));
  parts.push_back(payload);
  return Formula::conj(std::move(parts));
}

void validate_epsilon(const Rational& eps) {
  if (eps.num < 1 || eps.den < 1)
    throw DomainError("slack must be a positive fraction");
  if (eps.num >= 50 * eps.den) throw DomainError("slack must be below 50");
}

}  // namespace

long long compute_m(long long total_machine_vars, const Rational& epsilon) {
  validate_epsilon(epsilon);
  if (total_machine_vars < 1)
    throw DomainError("variable total must be positive");
  // m / (V + 2m) >= (50 den - num) / (100 den) rearranges to
  // 2 num m >= (50 den - num) V, both sides positive.
  __int128 numerator =
      (static_cast<__int128>(50) * epsilon.den - epsilon.num) *
      total_machine_vars;
  __int128 divisor = static_cast<__int128>(2) * epsilon.num;
  __int128 m = (numerator + divisor - 1) / divisor;
  if (m < 1) m = 1;
  if (m > static_cast<__int128>(1'000'000'000'000LL))
    throw DomainError("selector width exceeds the supported range");
  return static_cast<long long>(m);
}

GadgetInstance build_a3k(const ConstructionParams& params,
                         const std::string& input,
                         const SimulationBudget& budget) {
  if (params.family != GadgetFamily::A3k)
    throw DomainError("parameters describe a different family");
  if (params.k < 1) throw DomainError("selector width must be at least 1");
  validate_bits(input);
  require_complementary(params, input, budget);

  ReductionArtifact left = reduce(params.machine_i, input);
  ReductionArtifact right = reduce(params.machine_j, input);
  Formula g =
      Formula::disj({selector_branch(params.k, false, true, left.formula),
                     selector_branch(params.k, false, false, right.formula)});
  return GadgetInstance{
      .formula = std::move(g),
      .input = input,
      .family = GadgetFamily::A3k,
      .k_or_m = params.k,
      .epsilon = Rational{1, 1},
      .left_vars = numvars(left.formula),
      .right_vars = numvars(right.formula),
      .tag_i = left.machine_tag,
      .tag_j = right.machine_tag,
  };
}

GadgetInstance build_thm3(const ConstructionParams& params,
                          const std::string& input,
                          const SimulationBudget& budget) {
  if (params.family != GadgetFamily::Thm3)
    throw DomainError("parameters describe a different family");
  validate_bits(input);
  require_complementary(params, input, budget);

  ReductionArtifact left = reduce(params.machine_i, input);
  ReductionArtifact right = reduce(params.machine_j, input);
  std::size_t vi = numvars(left.formula);
  std::size_t vj = numvars(right.formula);
  long long m =
      compute_m(static_cast<long long>(vi + vj), params.epsilon);
  Formula g =
      Formula::disj({selector_branch(m, false, true, left.formula),
                     selector_branch(m, true, false, right.formula)});
  return GadgetInstance{
      .formula = std::move(g),
      .input = input,
      .family = GadgetFamily::Thm3,
      .k_or_m = m,
      .epsilon = params.epsilon,
      .left_vars = vi,
      .right_vars = vj,
      .tag_i = left.machine_tag,
      .tag_j = right.machine_tag,
  };
}

std::vector<VarName> f_backbone(const GadgetInstance& instance) {
  if (instance.family != GadgetFamily::A3k)
    throw DomainError(
        "only the plain family keeps one selector set across both branches");
  std::vector<VarName> out;
  out.reserve(static_cast<std::size_t>(instance.k_or_m));
  for (long long i = 1; i <= instance.k_or_m; ++i)
    out.push_back(VarName::zvar(i, false));
  return out;
}

bool membership_test(const ConstructionParams& params, const Formula& f,
                     const SimulationBudget& budget) {
  if (f.kind() != Formula::Kind::Or || f.children().size() != 2) return false;
  const Formula& c1 = f.child(0);
  const Formula& c2 = f.child(1);
  if (c1.kind() != Formula::Kind::And || c2.kind() != Formula::Kind::And)
    return false;
  std::size_t n1 = c1.children().size();
  if (n1 < 2 || n1 != c2.children().size()) return false;
  std::size_t sel = n1 - 1;
  bool primed_right = params.family == GadgetFamily::Thm3;
  for (std::size_t i = 0; i < sel; ++i) {
    long idx = static_cast<long>(i) + 1;
    const Formula& a = c1.child(i);
    if (a.kind() != Formula::Kind::Var || a.name() != VarName::zvar(idx))
      return false;
    const Formula& b = c2.child(i);
    if (b.kind() != Formula::Kind::Not) return false;
    const Formula& bv = b.child(0);
    if (bv.kind() != Formula::Kind::Var ||
        bv.name() != VarName::zvar(idx, primed_right))
      return false;
  }
  if (params.family == GadgetFamily::A3k &&
      static_cast<long long>(sel) != params.k)
    return false;

  InversionResult left = invert(c1.child(sel));
  InversionResult right = invert(c2.child(sel));
  if (left.junk() || right.junk()) return false;
  if (left.input != right.input) return false;
  if (left.tag != canonical_tag(params.machine_i)) return false;
  if (right.tag != canonical_tag(params.machine_j)) return false;

  // The authoritative check: rebuild from the decoded input and compare
  // byte for byte, so near misses never pass.
  try {
    GadgetInstance rebuilt = params.family == GadgetFamily::A3k
                                 ? build_a3k(params, left.input, budget)
                                 : build_thm3(params, left.input, budget);
    return serialize_formula(rebuilt.formula) == serialize_formula(f);
  } catch (const FixtureError&) {
    return false;
  }
}

bool decide_via_backbone_value(const ConstructionParams& params,
                               const std::string& input,
                               const BackboneValueOracle& oracle) {
  if (params.family != GadgetFamily::A3k)
    throw DomainError("membership readout needs the fixed selector set");
  GadgetInstance instance = build_a3k(params, input);
  std::vector<VarName> selectors = f_backbone(instance);
  PartialAssignment values = oracle
                                 ? oracle(instance.formula, selectors)
                                 : backbone_value(instance.formula, selectors);
  bool all_true = true;
  bool all_false = true;
  for (const auto& v : selectors) {
    auto it = values.find(v);
    if (it == values.end())
      throw InconsistentOracleError("oracle returned no value for " +
                                    v.text());
    (it->second ? all_false : all_true) = false;
  }
  if (all_true == all_false)
    throw InconsistentOracleError(
        "selector values are mixed, which no well-formed instance produces");
  return all_true;
}

BackboneSide classify_backbone_side(
    const std::vector<VarName>& backbone_set) {
  bool has_plain = false;
  bool has_primed = false;
  for (const auto& v : backbone_set) {
    if (v.kind() != VarName::Kind::ZSeries) continue;
    (v.primed() ? has_primed : has_plain) = true;
  }
  if (has_plain == has_primed) return BackboneSide::Impossible;
  return has_plain ? BackboneSide::Left : BackboneSide::Right;
}

std::string gadget_metadata(const GadgetInstance& instance) {
  std::ostringstream os;
  os << "family " << (instance.family == GadgetFamily::A3k ? "a3k" : "thm3")
     << '\n';
  if (instance.family == GadgetFamily::A3k) {
    os << "k " << instance.k_or_m << '\n';
  } else {
    os << "epsilon " << instance.epsilon.num << '/' << instance.epsilon.den
       << '\n';
    os << "m " << instance.k_or_m << '\n';
  }
  os << "input " << instance.input << '\n';
  os << "tag_i " << instance.tag_i.text << '\n';
  os << "tag_j " << instance.tag_j.text << '\n';
  os << "left_vars " << instance.left_vars << '\n';
  os << "right_vars " << instance.right_vars << '\n';
  return os.str();
}

}  // namespace bblab
