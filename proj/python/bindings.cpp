#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "bblab/backbone.hpp"
#include "bblab/cnf.hpp"
#include "bblab/error.hpp"
#include "bblab/formula.hpp"
#include "bblab/frequency.hpp"
#include "bblab/gadgets.hpp"
#include "bblab/machine.hpp"
#include "bblab/reduction.hpp"
#include "bblab/solver.hpp"

namespace py = pybind11;

namespace {

// The python surface stays at the string/dict level: formulas travel as
// their canonical serialization, machines as .tm text, assignments as
// {name: bool} dicts.

bblab::Formula formula_of(const std::string& text) {
  return bblab::parse_formula(text);
}

py::dict assignment_dict(const bblab::PartialAssignment& a) {
  py::dict d;
  for (const auto& [v, b] : a) d[py::str(v.text())] = b;
  return d;
}

bblab::PartialAssignment assignment_of(const py::dict& d) {
  bblab::PartialAssignment a;
  for (auto item : d) {
    a[bblab::VarName::parse(item.first.cast<std::string>())] =
        item.second.cast<bool>();
  }
  return a;
}

bblab::ConstructionParams params_of(const std::string& family,
                                    const std::string& tm_i,
                                    const std::string& tm_j, long long k,
                                    long long eps_num, long long eps_den) {
  bblab::GadgetFamily fam;
  if (family == "a3k") {
    fam = bblab::GadgetFamily::A3k;
  } else if (family == "thm3") {
    fam = bblab::GadgetFamily::Thm3;
  } else {
    throw bblab::ParseError("unknown family \"" + family + "\"");
  }
  return bblab::ConstructionParams{fam, bblab::parse_tm(tm_i),
                                   bblab::parse_tm(tm_j), k,
                                   bblab::Rational{eps_num, eps_den}};
}

py::dict instance_dict(const bblab::GadgetInstance& g) {
  py::dict d;
  d["formula"] = bblab::serialize_formula(g.formula);
  d["metadata"] = bblab::gadget_metadata(g);
  d["input"] = g.input;
  d["k_or_m"] = g.k_or_m;
  d["left_vars"] = g.left_vars;
  d["right_vars"] = g.right_vars;
  d["tag_i"] = g.tag_i.text;
  d["tag_j"] = g.tag_j.text;
  return d;
}

py::dict report_dict(const bblab::FrozenReport& report) {
  py::dict d;
  d["satisfiable"] = report.satisfiable;
  py::dict frozen;
  for (const auto& [v, b] : report.frozen) frozen[py::str(v.text())] = b;
  d["frozen"] = frozen;
  return d;
}

void bind_formula_ops(py::module_& m) {
  m.def(
      "roundtrip",
      [](const std::string& text) {
        return bblab::serialize_formula(formula_of(text));
      },
      py::arg("formula"),
      "Parse a formula and return its canonical serialization.");
  m.def(
      "variables",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& v : bblab::vars(formula_of(text)))
          out.push_back(v.text());
        return out;
      },
      py::arg("formula"), "Sorted variable names of a formula.");
  m.def(
      "solve",
      [](const std::string& text, std::int64_t budget) -> py::object {
        bblab::SatResult r = bblab::solve(formula_of(text), budget);
        if (!r.sat()) return py::none();
        return assignment_dict(r.model);
      },
      py::arg("formula"), py::arg("budget") = bblab::kDefaultConflictBudget,
      "Model as a dict, or None when unsatisfiable.");
  m.def(
      "export_dimacs",
      [](const std::string& text) {
        bblab::CnfFormula cnf = bblab::tseitin(formula_of(text));
        return py::make_tuple(bblab::to_dimacs(cnf),
                              bblab::origin_map_text(cnf));
      },
      py::arg("formula"),
      "Clausal form: (dimacs text, variable map text).");
}

void bind_machine_ops(py::module_& m) {
  m.def(
      "canonical_tag",
      [](const std::string& tm) {
        return bblab::canonical_tag(bblab::parse_tm(tm)).text;
      },
      py::arg("machine"), "Canonical single-token machine identifier.");
  m.def(
      "accepts",
      [](const std::string& tm, const std::string& input) {
        return bblab::accepts(bblab::parse_tm(tm), input);
      },
      py::arg("machine"), py::arg("input"),
      "Whether the clocked machine accepts the input.");
  m.def(
      "reduce",
      [](const std::string& tm, const std::string& input) {
        bblab::ReductionArtifact art =
            bblab::reduce(bblab::parse_tm(tm), input);
        py::dict d;
        d["formula"] = bblab::serialize_formula(art.formula);
        d["machine_tag"] = art.machine_tag.text;
        d["input"] = art.input;
        d["p"] = art.p;
        return d;
      },
      py::arg("machine"), py::arg("input"),
      "Acceptance formula plus its tag, input and variable count.");
  m.def(
      "invert",
      [](const std::string& text) -> py::object {
        bblab::InversionResult inv = bblab::invert(formula_of(text));
        if (inv.junk()) return py::none();
        py::dict d;
        d["machine_tag"] = inv.tag.text;
        d["input"] = inv.input;
        return d;
      },
      py::arg("formula"),
      "Decoded (machine_tag, input) dict, or None for junk.");
}

void bind_gadget_ops(py::module_& m) {
  m.def(
      "build_a3k",
      [](const std::string& tm_i, const std::string& tm_j, long long k,
         const std::string& input) {
        return instance_dict(bblab::build_a3k(
            params_of("a3k", tm_i, tm_j, k, 1, 1), input));
      },
      py::arg("machine_i"), py::arg("machine_j"), py::arg("k"),
      py::arg("input"));
  m.def(
      "build_thm3",
      [](const std::string& tm_i, const std::string& tm_j, long long eps_num,
         long long eps_den, const std::string& input) {
        return instance_dict(bblab::build_thm3(
            params_of("thm3", tm_i, tm_j, 1, eps_num, eps_den), input));
      },
      py::arg("machine_i"), py::arg("machine_j"), py::arg("eps_num"),
      py::arg("eps_den"), py::arg("input"));
  m.def(
      "member",
      [](const std::string& family, const std::string& tm_i,
         const std::string& tm_j, long long k, long long eps_num,
         long long eps_den, const std::string& formula) {
        return bblab::membership_test(
            params_of(family, tm_i, tm_j, k, eps_num, eps_den),
            formula_of(formula));
      },
      py::arg("family"), py::arg("machine_i"), py::arg("machine_j"),
      py::arg("k"), py::arg("eps_num"), py::arg("eps_den"),
      py::arg("formula"),
      "Exact membership in the chosen gadget family.");
  m.def("compute_m",
        [](long long total_vars, long long eps_num, long long eps_den) {
          return bblab::compute_m(total_vars,
                                  bblab::Rational{eps_num, eps_den});
        },
        py::arg("total_vars"), py::arg("eps_num"), py::arg("eps_den"),
        "Minimal selector width for the sized family.");
}

void bind_backbone_ops(py::module_& m) {
  m.def(
      "frozen_brute",
      [](const std::string& text, std::size_t limit) {
        return report_dict(bblab::frozen_vars_brute(formula_of(text), limit));
      },
      py::arg("formula"), py::arg("limit") = bblab::kDefaultBruteLimit);
  m.def(
      "frozen_sat",
      [](const std::string& text, std::int64_t budget) {
        return report_dict(bblab::frozen_vars_sat(formula_of(text), budget));
      },
      py::arg("formula"), py::arg("budget") = bblab::kDefaultConflictBudget);
  m.def(
      "verify_backbone",
      [](const std::string& text, const py::dict& assignment) {
        bblab::PartialAssignment a = assignment_of(assignment);
        std::vector<bblab::VarName> s;
        for (const auto& [v, b] : a) {
          (void)b;
          s.push_back(v);
        }
        return bblab::verify_backbone(formula_of(text), s, a);
      },
      py::arg("formula"), py::arg("assignment"),
      "Whether the assignment is the forced value of its variable set.");
  m.def(
      "backbone_value",
      [](const std::string& text, const std::vector<std::string>& names) {
        std::vector<bblab::VarName> s;
        for (const auto& n : names) s.push_back(bblab::VarName::parse(n));
        return assignment_dict(bblab::backbone_value(formula_of(text), s));
      },
      py::arg("formula"), py::arg("vars"),
      "Forced values of the set; raises when the set is not a backbone.");
}

void bind_frequency_ops(py::module_& m) {
  m.def(
      "transfer_check",
      [](const std::string& tm_i, const std::string& tm_j, long long k,
         std::size_t max_n, const std::string& adapter) {
        bblab::DensityProfile p = bblab::transfer_check(
            params_of("a3k", tm_i, tm_j, k, 1, 1), max_n,
            bblab::parse_adapter(adapter));
        py::dict d;
        d["tsv"] = bblab::render_profile_tsv(p);
        d["summary"] = bblab::render_profile_summary(p);
        d["injective"] = p.injective;
        d["transfer_holds"] = p.transfer_holds;
        d["fitted_q"] = p.fitted_q;
        d["epsilon_hat"] = p.epsilon_hat;
        return d;
      },
      py::arg("machine_i"), py::arg("machine_j"), py::arg("k"),
      py::arg("max_n"), py::arg("adapter"),
      "Run the error-transfer harness and return its report.");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Invertible machine-to-formula reductions, selector gadgets "
            "and backbone extraction.";

  // Later registrations are tried first, so the base goes in first and the
  // narrower kinds after it.
  py::register_exception<bblab::Error>(m, "ToolkitError", PyExc_RuntimeError);
  py::register_exception<bblab::ParseError>(m, "FormulaParseError",
                                            PyExc_ValueError);
  py::register_exception<bblab::NotABackboneError>(m, "NotABackboneError",
                                                   PyExc_ValueError);

  bind_formula_ops(m);
  bind_machine_ops(m);
  bind_gadget_ops(m);
  bind_backbone_ops(m);
  bind_frequency_ops(m);

  m.attr("__version__") = "0.1.0";
}
