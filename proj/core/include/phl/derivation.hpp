#pragma once

// Rule instances of the partial Horn proof system and derivation trees.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phl/syntax.hpp"

namespace phl {

enum class Rule { Axiom, Id, Cut, Subst, Refl, Eq, SRel, SEq, SFun, EConj, IConj };

std::string to_string(Rule r);
std::optional<Rule> rule_from_string(std::string_view s);

/// Fields a rule does not use are ignored. `context` and `formula` may be left
/// empty in a derivation; check_derivation then reads them off the node's root.
struct RuleInstance {
  Rule rule = Rule::Id;
  std::string axiom;                    // Axiom
  std::optional<Context> context;       // ambient context (target context for Subst)
  std::optional<Formula> formula;       // Id: φ; Eq: φ; SRel/SEq/SFun: the atom; EConj: ⋀φ_i
  Substitution subst;                   // Subst
  std::vector<std::string> xs, ys;      // Eq
  std::size_t index = 0;                // Refl i; SRel, SFun, EConj j
  bool right = false;                   // SEq: σ↓ instead of τ↓
};

class RuleError : public Error {
 public:
  using Error::Error;
};

/// Number of premises the rule takes; IConj takes any number (returns -1).
int rule_arity(Rule r);

/// Conclusion of the instance applied to `premises`; throws RuleError with the reason.
Sequent check_rule(const Theory& theory, const RuleInstance& instance, const std::vector<Sequent>& premises);

struct Derivation {
  Sequent root;
  RuleInstance rule;
  std::vector<Derivation> children;

  std::size_t size() const;
  std::size_t height() const;
};

/// Fills an instance's context/formula from a node root (as check_derivation does).
RuleInstance complete_instance(RuleInstance instance, const Sequent& root);

/// Same context (names and sorts) and formulas equal up to conjunction nesting and truth units.
bool same_sequent(const Sequent& a, const Sequent& b);
/// Same up to renaming the context variables positionally.
bool alpha_equivalent(const Sequent& a, const Sequent& b);

struct DerivationCheck {
  bool ok = true;
  /// Child indices from the root to the first failing node (pre-order).
  std::vector<std::size_t> path;
  std::string reason;
  explicit operator bool() const { return ok; }
};

DerivationCheck check_derivation(const Theory& theory, const Derivation& d);

// ---------------------------------------------------------------------------
// Derivation files: an optional `derivation NAME` header, optional
// `hypothesis NAME [ctx] PHI |- PSI;` lines, then one node per line,
//   [ctx] PHI |- PSI   [rule NAME {data}]
// with children indented deeper than their parent.

struct DerivationFile {
  std::string name;
  std::vector<Axiom> hypotheses;
  Derivation derivation;

  /// The theory extended by the hypotheses.
  Theory theory_with_hypotheses(const Theory& base) const;
};

DerivationFile parse_derivation(const Theory& theory, std::string_view text);
std::string print_derivation(const Derivation& d, const std::string& name = {},
                             const std::vector<Axiom>& hypotheses = {});

}  // namespace phl
