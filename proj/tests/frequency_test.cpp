#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "bblab/backbone.hpp"
#include "bblab/frequency.hpp"
#include "bblab/gadgets.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bblab;

namespace {

ConstructionParams family_params(long long k = 1) {
  return ConstructionParams{GadgetFamily::A3k, testing::fixture_last0(),
                            testing::fixture_last1(), k, Rational{1, 1}};
}

}  // namespace

TEST_CASE("family enumeration is shortlex over nonempty inputs") {
  auto fam2 = enumerate_family(family_params(), 2);
  REQUIRE(fam2.size() == 6);
  std::vector<std::string> inputs;
  for (const auto& g : fam2) inputs.push_back(g.input);
  CHECK(inputs == std::vector<std::string>{"0", "1", "00", "01", "10", "11"});

  CHECK(enumerate_family(family_params(), 0).empty());
  CHECK(enumerate_family(family_params(), 3).size() == 14);
  CHECK(enumerate_family(family_params(), 4).size() == 30);

  ConstructionParams thm3{GadgetFamily::Thm3, testing::fixture_last0(),
                          testing::fixture_last1(), 1, Rational{1, 1}};
  CHECK_THROWS_AS(enumerate_family(thm3, 2), DomainError);
}

TEST_CASE("selector sets can be read straight off the formula") {
  auto fam = enumerate_family(family_params(3), 1);
  for (const auto& g : fam) {
    auto direct = designated_selectors(g.formula);
    CHECK(direct == f_backbone(g));
    REQUIRE(direct.size() == 3);
  }
  CHECK_THROWS_AS(designated_selectors(parse_formula("(var z.1)")),
                  DomainError);
  CHECK_THROWS_AS(designated_selectors(parse_formula("(or (var a) (var b))")),
                  DomainError);
  CHECK_THROWS_AS(
      designated_selectors(parse_formula(
          "(or (and (var a) (var b)) (and (var c) (var d)))")),
      DomainError);
}

TEST_CASE("adapter names round-trip and unknown names are refused") {
  for (AdapterKind k : {AdapterKind::AllTrue, AdapterKind::AllFalse,
                        AdapterKind::ParityOfLength, AdapterKind::Oracle}) {
    CHECK(parse_adapter(adapter_name(k)) == k);
  }
  CHECK(std::string(adapter_name(AdapterKind::ParityOfLength)) ==
        "parity-of-length");
  CHECK_THROWS_AS(parse_adapter("bogus"), ParseError);
  CHECK_THROWS_AS(parse_adapter(""), ParseError);
}

TEST_CASE("adapter claims are constant except for the oracle") {
  GadgetInstance g = build_a3k(family_params(2), "0");
  auto sel = f_backbone(g);

  auto t = adapter_claim(AdapterKind::AllTrue, g.formula);
  auto f = adapter_claim(AdapterKind::AllFalse, g.formula);
  CHECK(bits_of(sel, t) == "11");
  CHECK(bits_of(sel, f) == "00");

  auto p = adapter_claim(AdapterKind::ParityOfLength, g.formula);
  bool even = serialize_formula(g.formula).size() % 2 == 0;
  CHECK(bits_of(sel, p) == (even ? "11" : "00"));

  // The oracle claim is the true backbone value.
  auto o = adapter_claim(AdapterKind::Oracle, g.formula);
  CHECK(o == backbone_value(g.formula, sel));
  CHECK(bits_of(sel, o) == "11");  // "0" is a member for the left machine
}

TEST_CASE("error accounting matches a by-hand recount") {
  const std::size_t max_n = 3;
  auto params = family_params();
  auto fam = enumerate_family(params, max_n);

  for (AdapterKind kind : {AdapterKind::AllTrue, AdapterKind::AllFalse,
                           AdapterKind::ParityOfLength, AdapterKind::Oracle}) {
    CAPTURE(adapter_name(kind));
    DensityProfile prof = transfer_check(params, max_n, kind);
    CHECK(prof.instances == fam.size());
    CHECK(prof.injective);
    CHECK(prof.transfer_holds);
    REQUIRE(prof.rows.size() == max_n);

    // Recount from scratch, one row at a time.
    for (std::size_t n = 1; n <= max_n; ++n) {
      const TransferRow& row = prof.rows[n - 1];
      CHECK(row.n == n);
      std::size_t inputs = 0, max_len = 0, eb = 0;
      for (const auto& g : fam) {
        if (g.input.size() > n) continue;
        ++inputs;
        max_len = std::max(max_len, serialize_formula(g.formula).size());
        bool member = accepts(params.machine_i, g.input);
        bool claims_member =
            bits_of(f_backbone(g), adapter_claim(kind, g.formula))
                .find('0') == std::string::npos;
        if (claims_member != member) ++eb;
      }
      std::size_t ea = 0;
      for (const auto& g : fam) {
        if (serialize_formula(g.formula).size() > max_len) continue;
        auto truth = backbone_value(g.formula, f_backbone(g));
        if (adapter_claim(kind, g.formula) != truth) ++ea;
      }
      CHECK(row.inputs == inputs);
      CHECK(row.max_len == max_len);
      CHECK(row.errors_a == ea);
      CHECK(row.errors_b == eb);
      CHECK(row.errors_b <= row.errors_a);
    }
  }
}

TEST_CASE("the constant adapters err exactly on one half of the inputs") {
  // The left machine accepts exactly the inputs ending in 0, so all-true is
  // wrong precisely on those ending in 1 and all-false on those ending in 0:
  // 1, 3, 7 inputs at n = 1, 2, 3.
  DensityProfile t = transfer_check(family_params(), 3, AdapterKind::AllTrue);
  DensityProfile f = transfer_check(family_params(), 3, AdapterKind::AllFalse);
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t want = (std::size_t{2} << i) - 1;
    CHECK(t.rows[i].errors_b == want);
    CHECK(t.rows[i].errors_a == want);
    CHECK(f.rows[i].errors_b == want);
    CHECK(f.rows[i].errors_a == want);
  }

  DensityProfile o = transfer_check(family_params(), 3, AdapterKind::Oracle);
  for (const auto& row : o.rows) {
    CHECK(row.errors_a == 0);
    CHECK(row.errors_b == 0);
  }
}

TEST_CASE("rows grow monotonically") {
  DensityProfile prof =
      transfer_check(family_params(), 4, AdapterKind::AllTrue);
  for (std::size_t i = 1; i < prof.rows.size(); ++i) {
    CHECK(prof.rows[i].inputs > prof.rows[i - 1].inputs);
    CHECK(prof.rows[i].max_len > prof.rows[i - 1].max_len);
    CHECK(prof.rows[i].errors_a >= prof.rows[i - 1].errors_a);
    CHECK(prof.rows[i].errors_b >= prof.rows[i - 1].errors_b);
  }
}

TEST_CASE("the length fit recovers a plausible growth exponent") {
  DensityProfile prof =
      transfer_check(family_params(), 4, AdapterKind::Oracle);
  // Three log-log points (n = 2, 3, 4); the tableau grows a bit faster
  // than linear at these sizes, far below the quadratic regime.
  CHECK(prof.fitted_q > 1.0);
  CHECK(prof.fitted_q < 4.0);
  CHECK(prof.epsilon_hat == doctest::Approx(1.0 / prof.fitted_q));
  CHECK(prof.residual >= 0.0);
  CHECK(prof.residual < 0.2);

  // A single usable point cannot be fitted; the fields stay zero.
  DensityProfile tiny =
      transfer_check(family_params(), 2, AdapterKind::Oracle);
  CHECK(tiny.fitted_q == 0.0);
  CHECK(tiny.epsilon_hat == 0.0);
}

TEST_CASE("profile rendering: the exact tabular and summary forms") {
  DensityProfile prof =
      transfer_check(family_params(), 2, AdapterKind::AllTrue);
  std::string tsv = render_profile_tsv(prof);
  CHECK(tsv.rfind("n\tinputs\tmax_len\terrors_a\terrors_b\n", 0) == 0);
  // One line per row plus the header.
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 3);
  std::string line1 = tsv.substr(tsv.find('\n') + 1);
  line1 = line1.substr(0, line1.find('\n'));
  CHECK(line1 == "1\t2\t" + std::to_string(prof.rows[0].max_len) + "\t1\t1");

  std::string summary = render_profile_summary(prof);
  CHECK(summary.find("adapter all-true\n") != std::string::npos);
  CHECK(summary.find("instances 6\n") != std::string::npos);
  CHECK(summary.find("injective yes\n") != std::string::npos);
  CHECK(summary.find("transfer_holds yes\n") != std::string::npos);
  CHECK(summary.find("fitted_q 0.000000\n") != std::string::npos);
  CHECK(summary.find("epsilon_hat 0.000000\n") != std::string::npos);
}
