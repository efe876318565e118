#pragma once

// Theory morphisms and the translations they induce, relative algebraic
// theories (operators with Horn arities over a base theory), and the
// translation of finite limit sketches into partial Horn theories.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phl/prover.hpp"
#include "phl/saturation.hpp"
#include "phl/structure.hpp"

namespace phl {

/// A function symbol's image: a term in a context of the translated argument sorts.
struct TermImage {
  Context context;
  Term term;
};

/// A relation symbol's image: a formula in a context of the translated argument sorts.
struct FormulaImage {
  Context context;
  Formula formula;
};

struct TheoryMorphism {
  std::string name;
  Theory source;
  Theory target;
  std::map<std::string, std::string> sort_map;
  std::map<std::string, TermImage> fun_map;
  std::map<std::string, FormulaImage> rel_map;

  const std::string& sort(const std::string& s) const;
};

/// Sort compatibility of every assignment; empty when well-formed.
std::vector<Diagnostic> well_formed(const TheoryMorphism& rho);

/// Identity on every symbol of `t`.
TheoryMorphism identity_morphism(const Theory& t);

Context translate(const TheoryMorphism& rho, const Context& ctx);
/// Definedness side conditions for arguments the image discards are appended to `side`.
Term translate(const TheoryMorphism& rho, const Term& t, std::vector<Formula>& side);
Formula translate(const TheoryMorphism& rho, const Formula& f);
Sequent translate(const TheoryMorphism& rho, const Sequent& s);

/// σ ∘ ρ, composing the images left to right.
TheoryMorphism compose(const TheoryMorphism& sigma, const TheoryMorphism& rho);

struct Obligation {
  std::string axiom;
  Sequent translated;
  Verdict verdict = Verdict::Unknown;
};

struct MorphismCheck {
  std::vector<Obligation> obligations;
  /// "accepted" (all proved), "provisional" (some unknown, none refuted) or "rejected".
  std::string status;
  bool accepted() const { return status == "accepted"; }
};

MorphismCheck check_theory_morphism(const TheoryMorphism& rho, const ProveOptions& options = {});

/// The reduct of a target structure along ρ.
Structure U_rho(const TheoryMorphism& rho, const Structure& target_model);

/// The representing model of the translated context and formula.
Presentation F_rho(const TheoryMorphism& rho, const Presentation& p, const ChaseOptions& options = {});

// ---------------------------------------------------------------------------

struct Operator {
  std::string name;
  Context context;
  Formula arity;
  std::string type;
};

struct RelativeTheory {
  std::string name;
  Theory base;
  std::vector<Operator> ops;
  std::vector<Axiom> judgments;

  const Operator* find_op(std::string_view name) const;
};

std::vector<Diagnostic> well_formed(const RelativeTheory& rt);

/// The partial Horn theory of the relative theory: base axioms, the two halves of
/// each operator's domain bisequent, then the judgments. Base symbols keep their indices.
Theory pht_of(const RelativeTheory& rt);

/// Inclusion of the base theory into pht_of(rt).
TheoryMorphism inclusion_morphism(const RelativeTheory& rt);

/// Forgets the operator tables.
Structure reduct(const RelativeTheory& rt, const Structure& algebra);

bool is_algebra(const Structure& m, const RelativeTheory& rt);

struct OperatorComparison {
  std::string op;
  Verdict verdict = Verdict::Unknown;
};

struct EquivalenceReport {
  std::vector<OperatorComparison> ops;
  /// "equivalent", "not equivalent" or "unknown".
  std::string status;
};

/// ρ, σ : pht_of(source) → target, identity on the base. Equivalent when the
/// target proves ar(ω) ⊢ ω^ρ = ω^σ for every operator ω.
EquivalenceReport morphism_equivalent(const RelativeTheory& source, const TheoryMorphism& rho,
                                      const TheoryMorphism& sigma, const ProveOptions& options = {});

// ---------------------------------------------------------------------------
// Text formats.
//
//   morphism RHO : S -> T
//   sort s => t;
//   fun f => [x:t, y:t] TERM;
//   rel R => [x:t] FORMULA;
//
//   relative NAME over BASE
//   op NAME [ctx] FORMULA : SORT;
//   judgment NAME [ctx] PHI |- PSI;

TheoryMorphism parse_morphism(std::string_view text, const Theory& source, const Theory& target);
std::string print_morphism(const TheoryMorphism& rho);

/// The text may start with the base theory's declarations; otherwise `base` is used.
RelativeTheory parse_relative_theory(std::string_view text, const Theory* base = nullptr);
std::string print_relative_theory(const RelativeTheory& rt);

/// True when the text contains a `relative` block.
bool is_relative_theory_text(std::string_view text);

// ---------------------------------------------------------------------------

struct SketchArrow {
  std::string name;
  std::string source, target;
};

struct SketchCone {
  std::string name;
  std::string apex;
  bool pullback = false;
  /// Product: one leg per factor. Pullback: legs to the two feet, then the two
  /// arrows into the common base (r0, r1).
  std::vector<std::string> legs;
  std::vector<std::string> base_arrows;
};

struct Sketch {
  std::string name;
  std::vector<std::string> objects;
  std::vector<SketchArrow> arrows;
  /// (g, f) ↦ g∘f for composable non-identity arrows; identities are implicit.
  std::map<std::pair<std::string, std::string>, std::string> compose;
  std::vector<SketchCone> cones;

  const SketchArrow* find_arrow(std::string_view name) const;
};

/// Throws Error describing the first defect.
void validate_sketch(const Sketch& s);

/// Groups a)-e) for every arrow, identity, composable pair and cone. With
/// `domain_sequents`, each cone's mediating symbol also gets the sequent fixing
/// its domain (q(x0,x1)↓ ⊢ r0(x0)=r1(x1) for pullbacks, ⊤ ⊢ p(x⃗)↓ for products);
/// without them a pullback's q may be defined on non-matching pairs.
Theory sketch_to_pht(const Sketch& s, bool domain_sequents = true);

Sketch parse_sketch(std::string_view text);

/// Labelled set-valued functors on the sketch with exactly the given carrier
/// sizes (one per object, in declaration order) sending each cone to a limit cone.
std::size_t count_sketch_models(const Sketch& s, const std::vector<int>& sizes);

}  // namespace phl
