#include "phl/prover.hpp"

#include "phl/model_finder.hpp"

namespace phl {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

ProofResult prove(const Theory& theory, const Sequent& sequent, const ProveOptions& options) {
  if (options.depth < 0) throw BudgetError("depth budget must be non-negative");
  if (options.model_size < 1) throw BudgetError("model size budget must be at least 1");
  require_well_formed(well_formed(theory));
  require_well_formed(well_formed(theory.signature, sequent));

  ProofResult result;
  ChaseOptions chase;
  chase.depth = options.depth;
  chase.max_classes = options.max_classes;
  chase.work_budget = options.work_budget;
  chase.goal = sequent.conclusion;

  Presentation p = saturate(theory, sequent.context, sequent.premise, chase);
  result.trace = p.trace;
  result.status = p.status;
  if (p.goal_round) {
    result.verdict = Verdict::Proved;
    result.depth = *p.goal_round;
    result.trace.resize(std::min(result.trace.size(), static_cast<std::size_t>(*p.goal_round + 1)));
    return result;
  }
  if (p.status.saturated) {
    // The chase reached a fixpoint: its structure is a model in which the generic
    // tuple satisfies the premise and not the conclusion.
    result.verdict = Verdict::Refuted;
    result.countermodel = p.model;
    result.witness = p.generic;
    result.countermodel_source = "presentation";
    return result;
  }

  FinderOptions fopt;
  fopt.node_budget = options.finder_node_budget;
  bool exhausted = true;
  for (const auto& sizes : size_vectors(theory.signature.sorts().size(), options.model_size)) {
    bool empty_context_sort = false;
    for (const auto& v : sequent.context.vars())
      if (sizes[theory.signature.sort_id(v.sort)] == 0) empty_context_sort = true;
    if (empty_context_sort) continue;
    FinderResult fr = enumerate_models(
        theory, sizes,
        [&](const Structure& m) {
          HoldsResult h = holds(m, sequent);
          if (h) return true;
          result.countermodel = m;
          result.witness = h.witness;
          return false;
        },
        fopt);
    if (result.countermodel) {
      result.verdict = Verdict::Refuted;
      result.countermodel_source = "search";
      return result;
    }
    if (!fr.complete) exhausted = false;
  }
  result.verdict = Verdict::Unknown;
  result.note = "chase truncated (" + p.status.reason + ") after " + std::to_string(p.status.depth) +
                " rounds; no countermodel with at most " + std::to_string(options.model_size) + " elements per sort" +
                (exhausted ? "" : " (search budget exhausted)");
  return result;
}

}  // namespace phl
