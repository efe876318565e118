#pragma once

// Closed monomorphisms, dense morphisms and the factorization they form;
// orthogonality, retractions and diagonal fillers between finite structures.

#include <optional>
#include <vector>

#include "phl/structure.hpp"
#include "phl/translation.hpp"

namespace phl {

/// Injective homomorphism reflecting definedness and relations. Throws Error when
/// h is not an injective homomorphism.
bool is_closed_mono(const Structure& m, const Structure& n, const Homomorphism& h);

struct Submodel {
  Structure model;
  /// model → the ambient structure
  Homomorphism inclusion;
};

/// Smallest subset closed under the function tables containing `generators`
/// (per sort, element indices), with the induced tables.
Submodel closed_submodel_generated(const Structure& b, const std::vector<std::vector<int>>& generators);

/// Image of h, per sort.
std::vector<std::vector<int>> image(const Structure& m, const Homomorphism& h);

bool is_dense(const Structure& m, const Structure& n, const Homomorphism& h);

struct Factorization {
  Structure mid;
  Homomorphism dense;        // m → mid
  Homomorphism closed_mono;  // mid → n
};

Factorization factorize(const Structure& m, const Structure& n, const Homomorphism& h);

/// Every hom a → target factors through e : a → b in exactly one way.
bool orthogonal(const Structure& target, const Structure& a, const Structure& b, const Homomorphism& e);

/// A section s : n → m with h ∘ s = id, when one exists.
std::optional<Homomorphism> is_retraction(const Structure& m, const Structure& n, const Homomorphism& h);

/// Whether U^ρ h has a section (m, n are target-theory structures).
std::optional<Homomorphism> is_U_retraction(const TheoryMorphism& rho, const Structure& m, const Structure& n,
                                            const Homomorphism& h);

/// Homs d : b → c with d ∘ e = u and m ∘ d = v, for the square
///   a --e--> b
///   u|       |v
///   c --m--> dd
std::size_t count_diagonal_fillers(const Structure& a, const Structure& b, const Structure& c, const Structure& dd,
                                   const Homomorphism& e, const Homomorphism& m, const Homomorphism& u,
                                   const Homomorphism& v);

}  // namespace phl
