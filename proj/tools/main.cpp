#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bblab/backbone.hpp"
#include "bblab/cnf.hpp"
#include "bblab/error.hpp"
#include "bblab/formula.hpp"
#include "bblab/frequency.hpp"
#include "bblab/gadgets.hpp"
#include "bblab/machine.hpp"
#include "bblab/reduction.hpp"
#include "bblab/solver.hpp"

namespace {

// Exit codes: 0 success, 1 usage or domain error, 2 parse error,
// 3 budget exhausted, 4 negative verification result.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNegative = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bblab::Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bblab::Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw bblab::Error("short write to " + path);
}

bblab::Formula load_formula(const std::string& path) {
  std::string text = slurp(path);
  // Trailing newline from our own writer is fine.
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
    text.pop_back();
  return bblab::parse_formula(text);
}

bblab::MachineDescription load_machine(const std::string& path) {
  return bblab::parse_tm(slurp(path));
}

std::vector<bblab::VarName> parse_var_list(const std::string& csv) {
  std::vector<bblab::VarName> out;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(bblab::VarName::parse(item));
  }
  if (out.empty()) throw bblab::ParseError("empty variable list");
  return out;
}

bblab::PartialAssignment parse_assignment(const std::string& csv) {
  bblab::PartialAssignment a;
  std::string item;
  std::istringstream in(csv);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.rfind('=');
    if (eq == std::string::npos || eq + 2 != item.size() ||
        (item[eq + 1] != '0' && item[eq + 1] != '1'))
      throw bblab::ParseError("expected name=0 or name=1, got \"" + item +
                              "\"");
    a[bblab::VarName::parse(item.substr(0, eq))] = item[eq + 1] == '1';
  }
  if (a.empty()) throw bblab::ParseError("empty assignment");
  return a;
}

struct GlobalOpts {
  std::int64_t budget_conflicts = bblab::kDefaultConflictBudget;
  std::size_t brute_limit = bblab::kDefaultBruteLimit;
  long long seed = 0;  // reserved for future randomized features
};

struct FamilyOpts {
  std::string machine_i;
  std::string machine_j;
  long long k = 1;
  std::string epsilon = "1/1";
  std::string family = "a3k";
};

bblab::Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  bblab::Rational r;
  try {
    if (slash == std::string::npos) {
      r.num = std::stoll(text);
      r.den = 1;
    } else {
      r.num = std::stoll(text.substr(0, slash));
      r.den = std::stoll(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw bblab::ParseError("expected NUM or NUM/DEN, got \"" + text + "\"");
  }
  return r;
}

bblab::ConstructionParams make_params(const FamilyOpts& fam) {
  bblab::GadgetFamily family;
  if (fam.family == "a3k") {
    family = bblab::GadgetFamily::A3k;
  } else if (fam.family == "thm3") {
    family = bblab::GadgetFamily::Thm3;
  } else {
    throw bblab::ParseError("unknown family \"" + fam.family + "\"");
  }
  return bblab::ConstructionParams{family, load_machine(fam.machine_i),
                                   load_machine(fam.machine_j), fam.k,
                                   parse_rational(fam.epsilon)};
}

void add_family_options(CLI::App* cmd, FamilyOpts& fam, bool with_family) {
  cmd->add_option("--machine-i", fam.machine_i, "left machine (.tm file)")
      ->required();
  cmd->add_option("--machine-j", fam.machine_j, "right machine (.tm file)")
      ->required();
  cmd->add_option("--k", fam.k, "selector width (a3k)");
  cmd->add_option("--epsilon", fam.epsilon, "slack NUM/DEN (thm3)");
  if (with_family)
    cmd->add_option("--family", fam.family, "a3k or thm3")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invertible reductions, selector gadgets and backbone tools"};
  app.require_subcommand(1);

  GlobalOpts global;
  app.add_option("--budget-conflicts", global.budget_conflicts,
                 "solver conflict budget per call");
  app.add_option("--brute-limit", global.brute_limit,
                 "variable cap for exhaustive backbone analysis");
  app.add_option("--seed", global.seed, "reserved");

  // reduce
  auto* cmd_reduce = app.add_subcommand("reduce", "encode a machine run");
  std::string opt_machine, opt_input, opt_out, opt_meta;
  cmd_reduce->add_option("--machine", opt_machine, ".tm file")->required();
  cmd_reduce->add_option("--input", opt_input, "binary input string");
  cmd_reduce->add_option("--out", opt_out, "output formula file")->required();
  cmd_reduce->add_option("--meta", opt_meta, "metadata sidecar file");

  // invert
  auto* cmd_invert = app.add_subcommand("invert", "decode a formula");
  std::string opt_formula;
  cmd_invert->add_option("--formula", opt_formula, "formula file")->required();

  // build
  auto* cmd_build = app.add_subcommand("build", "construct a gadget");
  cmd_build->require_subcommand(1);
  auto* cmd_a3k = cmd_build->add_subcommand("a3k", "fixed selector family");
  auto* cmd_thm3 = cmd_build->add_subcommand("thm3", "sized selector family");
  FamilyOpts fam_a3k, fam_thm3;
  std::string a3k_input, a3k_out, a3k_meta;
  std::string thm3_input, thm3_out, thm3_meta;
  add_family_options(cmd_a3k, fam_a3k, false);
  cmd_a3k->add_option("--input", a3k_input, "binary input string");
  cmd_a3k->add_option("--out", a3k_out, "output formula file")->required();
  cmd_a3k->add_option("--meta", a3k_meta, "metadata sidecar file");
  add_family_options(cmd_thm3, fam_thm3, false);
  cmd_thm3->add_option("--input", thm3_input, "binary input string");
  cmd_thm3->add_option("--out", thm3_out, "output formula file")->required();
  cmd_thm3->add_option("--meta", thm3_meta, "metadata sidecar file");

  // member
  auto* cmd_member = app.add_subcommand("member", "test gadget membership");
  FamilyOpts fam_member;
  std::string member_formula;
  add_family_options(cmd_member, fam_member, true);
  cmd_member->add_option("--formula", member_formula, "formula file")
      ->required();

  // backbone
  auto* cmd_backbone = app.add_subcommand("backbone", "list frozen variables");
  std::string bb_formula, bb_method = "sat";
  cmd_backbone->add_option("--formula", bb_formula, "formula file")
      ->required();
  cmd_backbone->add_option("--method", bb_method, "brute or sat");

  // backbone-value
  auto* cmd_value = app.add_subcommand(
      "backbone-value", "forced values of a variable set");
  std::string val_formula, val_vars;
  bool val_designated = false;
  cmd_value->add_option("--formula", val_formula, "formula file")->required();
  cmd_value->add_option("--vars", val_vars, "comma separated variable names");
  cmd_value->add_flag("--designated", val_designated,
                      "use the gadget's leading selector variables");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "check a backbone claim");
  std::string ver_formula, ver_assignment;
  cmd_verify->add_option("--formula", ver_formula, "formula file")->required();
  cmd_verify
      ->add_option("--assignment", ver_assignment,
                   "comma separated name=bit claims")
      ->required();

  // freq
  auto* cmd_freq = app.add_subcommand("freq", "error transfer report");
  FamilyOpts fam_freq;
  std::size_t freq_max_n = 2;
  std::string freq_adapter = "oracle";
  add_family_options(cmd_freq, fam_freq, false);
  cmd_freq->add_option("--max-n", freq_max_n, "input length bound");
  cmd_freq->add_option("--adapter", freq_adapter,
                       "all-true, all-false, parity-of-length or oracle");

  // export-dimacs
  auto* cmd_dimacs = app.add_subcommand("export-dimacs",
                                        "clausal form of a formula");
  std::string dx_formula, dx_out, dx_map;
  cmd_dimacs->add_option("--formula", dx_formula, "formula file")->required();
  cmd_dimacs->add_option("--out", dx_out, "DIMACS output file")->required();
  cmd_dimacs->add_option("--map", dx_map, "variable map sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_reduce->parsed()) {
      bblab::MachineDescription m = load_machine(opt_machine);
      bblab::validate_bits(opt_input);
      bblab::ReductionArtifact art = bblab::reduce(m, opt_input);
      spit(opt_out, bblab::serialize_formula(art.formula) + "\n");
      if (!opt_meta.empty()) spit(opt_meta, bblab::artifact_metadata(art));
      std::cout << "vars " << bblab::numvars(art.formula) << "\n"
                << "p " << art.p << "\n";
      return kExitOk;
    }

    if (cmd_invert->parsed()) {
      bblab::InversionResult inv = bblab::invert(load_formula(opt_formula));
      if (inv.junk()) {
        std::cout << "JUNK\n";
        return kExitNegative;
      }
      std::cout << "machine_tag " << inv.tag.text << "\n"
                << "input " << inv.input << "\n";
      return kExitOk;
    }

    if (cmd_a3k->parsed()) {
      fam_a3k.family = "a3k";
      bblab::ConstructionParams params = make_params(fam_a3k);
      bblab::validate_bits(a3k_input);
      bblab::GadgetInstance g = bblab::build_a3k(params, a3k_input);
      spit(a3k_out, bblab::serialize_formula(g.formula) + "\n");
      if (!a3k_meta.empty()) spit(a3k_meta, bblab::gadget_metadata(g));
      std::cout << "vars " << bblab::numvars(g.formula) << "\n"
                << "k " << g.k_or_m << "\n";
      return kExitOk;
    }

    if (cmd_thm3->parsed()) {
      fam_thm3.family = "thm3";
      bblab::ConstructionParams params = make_params(fam_thm3);
      bblab::validate_bits(thm3_input);
      bblab::GadgetInstance g = bblab::build_thm3(params, thm3_input);
      spit(thm3_out, bblab::serialize_formula(g.formula) + "\n");
      if (!thm3_meta.empty()) spit(thm3_meta, bblab::gadget_metadata(g));
      std::cout << "vars " << bblab::numvars(g.formula) << "\n"
                << "m " << g.k_or_m << "\n";
      return kExitOk;
    }

    if (cmd_member->parsed()) {
      bblab::ConstructionParams params = make_params(fam_member);
      bool in = bblab::membership_test(params, load_formula(member_formula));
      std::cout << (in ? "MEMBER" : "NONMEMBER") << "\n";
      return in ? kExitOk : kExitNegative;
    }

    if (cmd_backbone->parsed()) {
      bblab::Formula f = load_formula(bb_formula);
      bblab::FrozenReport report;
      if (bb_method == "brute") {
        report = bblab::frozen_vars_brute(f, global.brute_limit);
      } else if (bb_method == "sat") {
        report = bblab::frozen_vars_sat(f, global.budget_conflicts);
      } else {
        throw bblab::ParseError("unknown method \"" + bb_method + "\"");
      }
      std::cout << bblab::format_report(report);
      return kExitOk;
    }

    if (cmd_value->parsed()) {
      bblab::Formula f = load_formula(val_formula);
      if (val_designated != val_vars.empty())
        throw bblab::ParseError(
            "give exactly one of --vars and --designated");
      std::vector<bblab::VarName> set =
          val_designated ? bblab::designated_selectors(f)
                         : parse_var_list(val_vars);
      try {
        bblab::PartialAssignment value =
            bblab::backbone_value(f, set, global.budget_conflicts);
        for (const auto& [v, b] : value)
          std::cout << v.text() << ' ' << (b ? '1' : '0') << "\n";
        return kExitOk;
      } catch (const bblab::NotABackboneError& e) {
        std::cout << "NOT-A-BACKBONE\n";
        std::cerr << e.what() << "\n";
        return kExitNegative;
      }
    }

    if (cmd_verify->parsed()) {
      bblab::Formula f = load_formula(ver_formula);
      bblab::PartialAssignment a = parse_assignment(ver_assignment);
      std::vector<bblab::VarName> set;
      for (const auto& [v, b] : a) {
        (void)b;
        set.push_back(v);
      }
      bool ok = bblab::verify_backbone(f, set, a, global.budget_conflicts);
      std::cout << (ok ? "VERIFIED" : "NOT-A-BACKBONE") << "\n";
      return ok ? kExitOk : kExitNegative;
    }

    if (cmd_freq->parsed()) {
      fam_freq.family = "a3k";
      bblab::ConstructionParams params = make_params(fam_freq);
      bblab::DensityProfile profile = bblab::transfer_check(
          params, freq_max_n, bblab::parse_adapter(freq_adapter));
      std::cout << bblab::render_profile_tsv(profile)
                << bblab::render_profile_summary(profile);
      return kExitOk;
    }

    if (cmd_dimacs->parsed()) {
      bblab::CnfFormula cnf = bblab::tseitin(load_formula(dx_formula));
      spit(dx_out, bblab::to_dimacs(cnf));
      if (!dx_map.empty()) spit(dx_map, bblab::origin_map_text(cnf));
      std::cout << "vars " << cnf.num_vars << "\n"
                << "clauses " << cnf.clauses.size() << "\n";
      return kExitOk;
    }

    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const bblab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const bblab::BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const bblab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
