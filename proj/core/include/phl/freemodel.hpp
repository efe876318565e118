#pragma once

// Representing models and what can be computed from them: the hom/tuple
// correspondence, morphisms induced by term tuples, coequalizers, and free
// algebras of relative theories.

#include <optional>
#include <string>
#include <vector>

#include "phl/saturation.hpp"
#include "phl/translation.hpp"

namespace phl {

/// Bounded saturation of x⃗.φ; throws BudgetError when depth < 0.
Presentation representing_model(const Theory& theory, const Context& ctx, const Formula& phi, int depth,
                                ChaseOptions options = {});

struct YonedaReport {
  std::size_t tuples = 0;  // |⟦x⃗.φ⟧M|
  std::size_t homs = 0;    // |Hom(⌜x⃗.φ⌝, M)|
  /// The map tuple ↦ hom is well defined, injective and onto the enumerated homs.
  bool bijective = false;
  std::string message;
};

/// Refuses truncated presentations (throws Error).
YonedaReport yoneda_check(const Presentation& p, const Structure& m);

/// The hom ⌜τ⃗⌝ : p → q sending [σ] to [σ(τ⃗/x⃗)], where τ⃗ are terms over q's context.
/// Throws Error when q does not establish φ(τ⃗/x⃗) ∧ ⋀τ_i↓ or either side is truncated.
Homomorphism repn_morphism(const Theory& theory, const Presentation& p, const Presentation& q,
                           const std::vector<Term>& taus);

struct Coequalizer {
  Presentation presentation;
  /// q → presentation, sending each class to the class of its representative.
  Homomorphism quotient;
};

/// The coequalizer of ⌜τ⃗⌝, ⌜σ⃗⌝ : p ⇉ q, presented as ⌜y⃗. ψ ∧ ⋀ τ_i = σ_i⌝.
/// Throws BudgetError when the quotient does not saturate within `depth` rounds.
Coequalizer repn_coequalizer(const Theory& theory, const Presentation& p, const Presentation& q,
                             const std::vector<Term>& taus, const std::vector<Term>& sigmas, int depth);

struct FreeAlgebra {
  /// Over pht_of(rt); generators are context variables, one per element of M.
  Presentation presentation;
  /// M → reduct of the free algebra.
  Homomorphism unit;
  Structure reduct;
};

/// The free algebra on a finite model of the base theory: the representing model
/// of M's diagram (each table entry a constraint) over pht_of(rt).
FreeAlgebra free_algebra(const RelativeTheory& rt, const Structure& m, int depth, ChaseOptions options = {});

struct UniversalCheck {
  std::size_t algebras = 0;
  std::size_t mismatches = 0;
  /// Name of the first algebra where |Hom(free, B)| ≠ |Hom(M, U B)|.
  std::string first_mismatch;
  bool ok() const { return mismatches == 0; }
};

/// Compares hom counts against every algebra with at most `max_size` elements per sort.
UniversalCheck check_free_universal_property(const RelativeTheory& rt, const Structure& m, const FreeAlgebra& free,
                                             int max_size);

}  // namespace phl
