#pragma once

// Bounded decision procedure for sequents: chase the premise for a proof,
// otherwise look for a countermodel.

#include <optional>
#include <string>
#include <vector>

#include "phl/saturation.hpp"

namespace phl {

enum class Verdict { Proved, Refuted, Unknown };

std::string to_string(Verdict v);

struct ProveOptions {
  /// Chase rounds.
  int depth = 4;
  /// Largest carrier per sort in the countermodel search.
  int model_size = 4;
  std::size_t max_classes = 2000;
  std::size_t work_budget = 20'000'000;
  std::size_t finder_node_budget = 5'000'000;
};

struct ProofResult {
  Verdict verdict = Verdict::Unknown;
  /// Proved: round at which the conclusion first held.
  int depth = 0;
  /// The chase trace up to the proof (the certificate) or up to where it stopped.
  std::vector<RoundTrace> trace;
  SaturationStatus status;
  /// Refuted: a model of the theory and a tuple satisfying the premise but not the conclusion.
  std::optional<Structure> countermodel;
  Tuple witness;
  /// "presentation" when the saturated chase itself is the countermodel, "search" otherwise.
  std::string countermodel_source;
  /// Why the result is Unknown.
  std::string note;
};

/// Throws BudgetError for a negative depth or a model size below 1.
ProofResult prove(const Theory& theory, const Sequent& sequent, const ProveOptions& options = {});

}  // namespace phl
