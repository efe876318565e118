#pragma once

// Bounded forward chaining over an e-graph. Starting from the generators of a
// context and the facts of a formula, each round fires every axiom instance whose
// premise holds and whose conclusion does not, creating terms, merging classes
// and adding relation facts; congruence closure runs between rounds.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "phl/structure.hpp"

namespace phl {

struct ChaseOptions {
  int depth = 4;
  std::size_t max_classes = 2000;
  /// Upper bound on premise matches examined per round.
  std::size_t work_budget = 20'000'000;
  /// When set, the chase stops as soon as the generic tuple satisfies it.
  std::optional<Formula> goal;
};

struct SaturationStatus {
  bool saturated = false;
  /// Saturated: the last round that changed anything. Truncated: rounds run.
  int depth = 0;
  /// Why a truncated chase stopped: "depth", "classes" or "work".
  std::string reason;
};

struct RoundTrace {
  int round = 0;
  std::vector<std::pair<std::string, std::size_t>> fired;  // axiom name, instance count
  std::size_t classes = 0;
};

struct Presentation {
  Context context;
  Formula constraint;
  /// Elements are classes, named by their canonical representatives.
  Structure model;
  /// representatives[sort][element]
  std::vector<std::vector<Term>> representatives;
  /// Class of each context variable.
  Tuple generic;
  SaturationStatus status;
  std::vector<RoundTrace> trace;
  /// Round (0-based) at which the goal first held, when a goal was given.
  std::optional<int> goal_round;

  const Term& representative(std::size_t sort, int e) const {
    return representatives[sort][static_cast<std::size_t>(e)];
  }
  /// Class of a term over the context, when the term is present in the presentation.
  std::optional<int> element_of(const Term& t) const;
  bool provably_equal(const Term& a, const Term& b) const;
  /// Generic tuple lies in ⟦ψ⟧.
  bool generic_satisfies(const Formula& psi) const;
};

Presentation saturate(const Theory& theory, const Context& ctx, const Formula& phi, const ChaseOptions& options = {});

}  // namespace phl
