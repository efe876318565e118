#pragma once

// Closure of finite classes of models under products, closed submodels and
// retracts, definability experiments on finite pools, and the posetification
// of finite categories.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phl/structure.hpp"
#include "phl/translation.hpp"

namespace phl {

struct ModelUniverse {
  Theory theory;
  std::vector<Structure> models;
  /// Largest carrier per sort a constructed model may have.
  int size_cap = 4;
  /// Constructions skipped because they exceeded the cap.
  std::vector<std::string> skipped;

  /// Index of an isomorphic member.
  std::optional<std::size_t> find(const Structure& m) const;
  /// Adds m unless an isomorphic copy is present; returns whether it was added.
  bool add(Structure m);
  std::size_t size() const { return models.size(); }
};

ModelUniverse make_universe(const Theory& theory, std::vector<Structure> models, int size_cap = 4);

/// Closure under products of at most `arity_cap` factors (the empty product included),
/// iterated until nothing new fits under the size cap.
ModelUniverse close_P(const ModelUniverse& u, int arity_cap = 2);
/// Closure under closed submodels. With max_size >= 0 only submodels with at most
/// that many elements per sort are added, which avoids enumerating every subset.
ModelUniverse close_Scl(const ModelUniverse& u, int max_size = -1);
/// Adds every pool member that is the codomain of a retraction out of a member.
/// With ρ, the retraction only has to split after applying U^ρ.
ModelUniverse close_R(const ModelUniverse& u, const std::vector<Structure>& pool,
                      const TheoryMorphism* rho = nullptr);

/// Every member of `b` has an isomorphic copy in `a`.
bool contains_all(const ModelUniverse& a, const ModelUniverse& b);
/// Same members up to isomorphism.
bool same_members(const ModelUniverse& a, const ModelUniverse& b);

struct HspResult {
  /// R(S_cl(P(u))) restricted to the pool.
  ModelUniverse closure;
  /// Pool members the closure reaches that are not in u.
  std::vector<std::string> added;
  /// A second pass adds nothing in the pool.
  bool stable = false;
};

HspResult hsp_closure(const ModelUniverse& u, const std::vector<Structure>& pool, int arity_cap = 2,
                      const TheoryMorphism* rho = nullptr);

struct JudgmentReport {
  std::string judgment;
  std::size_t checked = 0;     // models compared
  std::size_t skipped = 0;     // judgment presentations that did not saturate
  std::size_t disagreements = 0;
  std::string witness;
};

struct DefinabilityReport {
  std::size_t pool = 0;
  std::size_t defined = 0;  // pool members satisfying T + T'
  bool fixed_point = false;
  /// Closure members outside the defined class.
  std::vector<std::string> witnesses;
  std::vector<JudgmentReport> judgments;
  bool ok() const;
};

/// E = pool members that are models of T + judgments; checks that E is its own
/// HSP closure within the pool and that validity of each judgment agrees with
/// orthogonality to ⌜φ⌝ → ⌜φ ∧ ψ⌝.
DefinabilityReport definability_check(const Theory& t, const std::vector<Axiom>& judgments,
                                      const std::vector<Structure>& pool, int arity_cap = 2, int depth = 4);

/// Same, with the class given directly instead of by judgments.
DefinabilityReport closure_check(const Theory& t, const std::vector<Structure>& cls,
                                 const std::vector<Structure>& pool, int arity_cap = 2);

// ---------------------------------------------------------------------------

struct FiniteCategory {
  std::vector<std::string> objects;
  struct Morphism {
    std::string name;
    std::size_t source = 0, target = 0;
  };
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities;  // per object
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> composition;  // (g, f) ↦ g∘f

  /// Throws Error unless composition is total on composable pairs, associative and unital.
  void validate() const;
};

struct FinitePoset {
  std::vector<std::vector<std::size_t>> elements;  // objects in each component
  std::vector<std::vector<bool>> leq;
};

FinitePoset posetification(const FiniteCategory& c);

struct AccReport {
  std::size_t longest_chain = 0;  // elements in a longest strict chain
  std::vector<std::size_t> chain;
};

AccReport acc_report(const FinitePoset& p);

/// The thin category on the universe with an arrow X → Y when a hom exists.
FiniteCategory component_diagram(const ModelUniverse& u);

}  // namespace phl
