#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bblab/error.hpp"

namespace bblab {

// A propositional variable name.  Three kinds exist:
//   tagged   x[TAG,q]   produced by renaming reductions; TAG is a machine
//                       tag and q >= 1 an index
//   z-series z.q / zp.q gadget padding variables (zp is the primed series)
//   free     IDENT      plain name over [a-z0-9_]
// The canonical spelling doubles as the sort key: names compare bytewise on
// their serialization.  The three kinds can never collide syntactically.
class VarName {
 public:
  enum class Kind { Tagged, ZSeries, Free };

  static VarName tagged(std::string tag, long index);
  static VarName zvar(long index, bool primed = false);
  static VarName freevar(std::string name);
  // Parses a canonical spelling; throws ParseError on anything else.
  static VarName parse(std::string_view token);

  Kind kind() const { return kind_; }
  // Canonical spelling.
  const std::string& text() const { return text_; }
  // Tagged only: the embedded machine tag.
  const std::string& tag() const;
  // Tagged and z-series: the index (>= 1).
  long index() const;
  // Z-series only: whether this is the primed series (zp).
  bool primed() const;

  friend bool operator==(const VarName& a, const VarName& b) {
    return a.text_ == b.text_;
  }
  friend bool operator!=(const VarName& a, const VarName& b) {
    return !(a == b);
  }
  friend bool operator<(const VarName& a, const VarName& b) {
    return a.text_ < b.text_;
  }

 private:
  VarName() = default;

  Kind kind_ = Kind::Free;
  std::string text_;
  std::string tag_;   // Tagged: tag text; Free: the identifier
  long index_ = 0;    // Tagged / ZSeries
  bool primed_ = false;
};

// Characters allowed inside a machine tag embedded in a tagged name.
bool is_valid_tag_text(std::string_view tag);

class Formula;

// Partial map from variables to truth values.  Ordered so iteration is
// deterministic.
using PartialAssignment = std::map<VarName, bool>;

// Result of substitution: a residual formula or a decided constant.
using FormulaOrBool = std::variant<Formula, bool>;

// Immutable formula AST: variable, negation, conjunction, disjunction.
// And/or take two or more children; there is no constant node, so every
// formula mentions at least one variable.  Nodes are shared, which makes
// copies cheap and lets substitution reuse untouched subtrees.
class Formula {
 public:
  enum class Kind { Var, Not, And, Or };

  static Formula var(VarName name);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> children);  // arity >= 2
  static Formula disj(std::vector<Formula> children);  // arity >= 2
  // var(name) or negate(var(name)) depending on sign.
  static Formula literal(VarName name, bool positive);

  Kind kind() const { return node_->kind; }
  const VarName& name() const;                  // Var only
  const std::vector<Formula>& children() const; // Not/And/Or
  const Formula& child(std::size_t i) const { return children()[i]; }

  // Structural equality (pointer-shortcut, then recursive).
  bool same_as(const Formula& other) const;

  // Stable identity of the underlying node, for memo tables.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Kind kind;
    VarName name;                 // Var
    std::vector<Formula> kids;    // Not/And/Or
    explicit Node(VarName v) : kind(Kind::Var), name(std::move(v)) {}
    Node(Kind k, std::vector<Formula> c)
        : kind(k), name(VarName::freevar("a")), kids(std::move(c)) {}
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Canonical textual form: "(var NAME)", "(not F)", "(and F F ...)",
// "(or F F ...)" with single spaces.  parse . serialize is the identity.
std::string serialize_formula(const Formula& f);
Formula parse_formula(std::string_view text);

// Distinct variables of the formula.
std::set<VarName> vars(const Formula& f);
std::size_t numvars(const Formula& f);

// Replaces every bound variable by its value and propagates constants all
// the way (identity and annihilation laws); and/or nodes left with a single
// child collapse to that child.  Bindings outside vars(f) are permitted and
// have no effect.
FormulaOrBool substitute(const Formula& f, const PartialAssignment& a);

// Evaluates under a total assignment; throws DomainError when a variable of
// the formula is unbound.
bool evaluate(const Formula& f, const PartialAssignment& a);

// A backbone candidate: a variable set together with the unique assignment
// claimed for it.  `value` must bind exactly `vars`.
struct BackboneCertificate {
  std::set<VarName> vars;
  PartialAssignment value;

  bool well_formed() const;
};

// Values of `order` under `a`, rendered as a bit string ('1' = true), in the
// order given.  Throws DomainError when a name is unbound.
std::string bits_of(const std::vector<VarName>& order,
                    const PartialAssignment& a);

}  // namespace bblab
