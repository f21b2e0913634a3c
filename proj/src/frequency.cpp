#include "bblab/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "bblab/backbone.hpp"
#include "bblab/error.hpp"

namespace bblab {

namespace {

std::vector<std::string> shortlex_inputs(std::size_t max_len) {
  std::vector<std::string> out;
  std::string x;
  for (std::size_t n = 1; n <= max_len; ++n) {
    x.assign(n, '0');
    while (true) {
      out.push_back(x);
      std::size_t i = n;
      while (i > 0 && x[i - 1] == '1') x[--i] = '0';
      if (i == 0) break;
      x[i - 1] = '1';
    }
  }
  return out;
}

bool all_true(const PartialAssignment& a) {
  for (const auto& [v, b] : a) {
    (void)v;
    if (!b) return false;
  }
  return true;
}

PartialAssignment constant_claim(const std::vector<VarName>& selectors,
                                 bool value) {
  PartialAssignment a;
  for (const auto& v : selectors) a.emplace(v, value);
  return a;
}

}  // namespace

std::vector<GadgetInstance> enumerate_family(const ConstructionParams& params,
                                             std::size_t max_input_len,
                                             const SimulationBudget& budget) {
  if (params.family != GadgetFamily::A3k)
    throw DomainError("only the fixed-selector family can be enumerated");
  std::vector<GadgetInstance> out;
  for (const auto& x : shortlex_inputs(max_input_len))
    out.push_back(build_a3k(params, x, budget));
  return out;
}

const char* adapter_name(AdapterKind kind) {
  switch (kind) {
    case AdapterKind::AllTrue:
      return "all-true";
    case AdapterKind::AllFalse:
      return "all-false";
    case AdapterKind::ParityOfLength:
      return "parity-of-length";
    case AdapterKind::Oracle:
      return "oracle";
  }
  throw Error("unreachable adapter kind");
}

AdapterKind parse_adapter(const std::string& name) {
  for (AdapterKind k : {AdapterKind::AllTrue, AdapterKind::AllFalse,
                        AdapterKind::ParityOfLength, AdapterKind::Oracle}) {
    if (name == adapter_name(k)) return k;
  }
  throw ParseError("unknown adapter \"" + name + "\"");
}

std::vector<VarName> designated_selectors(const Formula& gadget) {
  if (gadget.kind() != Formula::Kind::Or || gadget.children().size() != 2)
    throw DomainError("not a two-branch selector gadget");
  const Formula& first = gadget.child(0);
  if (first.kind() != Formula::Kind::And)
    throw DomainError("first branch is not a conjunction");
  std::vector<VarName> out;
  for (const auto& c : first.children()) {
    if (c.kind() == Formula::Kind::Var &&
        c.name().kind() == VarName::Kind::ZSeries && !c.name().primed()) {
      out.push_back(c.name());
    } else {
      break;
    }
  }
  if (out.empty()) throw DomainError("no leading selector variables");
  return out;
}

PartialAssignment adapter_claim(AdapterKind kind, const Formula& gadget) {
  std::vector<VarName> selectors = designated_selectors(gadget);
  switch (kind) {
    case AdapterKind::AllTrue:
      return constant_claim(selectors, true);
    case AdapterKind::AllFalse:
      return constant_claim(selectors, false);
    case AdapterKind::ParityOfLength:
      return constant_claim(selectors,
                            serialize_formula(gadget).size() % 2 == 0);
    case AdapterKind::Oracle:
      return backbone_value(gadget, selectors);
  }
  throw Error("unreachable adapter kind");
}

DensityProfile transfer_check(const ConstructionParams& params,
                              std::size_t max_input_len, AdapterKind kind,
                              const SimulationBudget& budget) {
  std::vector<GadgetInstance> family =
      enumerate_family(params, max_input_len, budget);

  DensityProfile profile;
  profile.adapter = kind;
  profile.instances = family.size();

  std::vector<std::size_t> lengths(family.size());
  std::vector<bool> err_a(family.size());
  std::vector<bool> err_b(family.size());
  std::set<std::string> forms;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const GadgetInstance& g = family[i];
    std::string form = serialize_formula(g.formula);
    lengths[i] = form.size();
    forms.insert(std::move(form));

    PartialAssignment truth =
        backbone_value(g.formula, f_backbone(g));
    PartialAssignment claim = adapter_claim(kind, g.formula);
    err_a[i] = claim != truth;
    bool member = accepts(params.machine_i, g.input, budget);
    err_b[i] = all_true(claim) != member;
  }
  profile.injective = forms.size() == family.size();

  profile.transfer_holds = true;
  for (std::size_t n = 1; n <= max_input_len; ++n) {
    TransferRow row;
    row.n = n;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (family[i].input.size() > n) continue;
      ++row.inputs;
      row.max_len = std::max(row.max_len, lengths[i]);
      if (err_b[i]) ++row.errors_b;
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (lengths[i] <= row.max_len && err_a[i]) ++row.errors_a;
    }
    if (row.errors_b > row.errors_a) profile.transfer_holds = false;
    profile.rows.push_back(row);
  }

  // Fit max_len ~ n^q on the log-log points with n >= 2.
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : profile.rows) {
    if (row.n >= 2 && row.max_len > 0)
      pts.emplace_back(std::log(static_cast<double>(row.n)),
                       std::log(static_cast<double>(row.max_len)));
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double nn = static_cast<double>(pts.size());
    double denom = nn * sxx - sx * sx;
    if (denom > 0) {
      double q = (nn * sxy - sx * sy) / denom;
      double b = (sy - q * sx) / nn;
      double ss = 0;
      for (auto& [x, y] : pts) {
        double r = y - (q * x + b);
        ss += r * r;
      }
      profile.fitted_q = q;
      profile.residual = std::sqrt(ss / nn);
      if (q > 0) profile.epsilon_hat = 1.0 / q;
    }
  }
  return profile;
}

std::string render_profile_tsv(const DensityProfile& profile) {
  std::ostringstream os;
  os << "n\tinputs\tmax_len\terrors_a\terrors_b\n";
  for (const auto& row : profile.rows) {
    os << row.n << '\t' << row.inputs << '\t' << row.max_len << '\t'
       << row.errors_a << '\t' << row.errors_b << '\n';
  }
  return os.str();
}

std::string render_profile_summary(const DensityProfile& profile) {
  std::ostringstream os;
  os << "adapter " << adapter_name(profile.adapter) << '\n';
  os << "instances " << profile.instances << '\n';
  os << "injective " << (profile.injective ? "yes" : "no") << '\n';
  os << "transfer_holds " << (profile.transfer_holds ? "yes" : "no") << '\n';
  os << std::fixed << std::setprecision(6);
  os << "fitted_q " << profile.fitted_q << '\n';
  os << "residual " << profile.residual << '\n';
  os << "epsilon_hat " << profile.epsilon_hat << '\n';
  return os.str();
}

}  // namespace bblab
