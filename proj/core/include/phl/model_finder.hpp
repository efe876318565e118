#pragma once

// Finite model enumeration by backtracking over function and relation table
// cells, pruning with a three-valued evaluation of axiom instances.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "phl/structure.hpp"

namespace phl {

struct FinderOptions {
  /// Keep one representative per isomorphism class (the lexicographically least
  /// relabelling). When false every labelled model is visited.
  bool iso_reduce = true;
  /// Search nodes before giving up.
  std::size_t node_budget = std::numeric_limits<std::size_t>::max();
};

struct FinderResult {
  std::size_t models = 0;
  bool complete = true;  // false when the budget ran out or the visitor stopped
};

/// Visits models with exactly the given carrier sizes (one entry per sort).
FinderResult enumerate_models(const Theory& theory, const std::vector<int>& sizes,
                              const std::function<bool(const Structure&)>& visit, const FinderOptions& options = {});

/// All size vectors with every entry in [min_size, max_size], ordered by total then lexicographically.
std::vector<std::vector<int>> size_vectors(std::size_t sorts, int max_size, int min_size = 0);

/// Every model with at most `max_size` elements per sort.
std::vector<Structure> all_models(const Theory& theory, int max_size, const FinderOptions& options = {},
                                  int min_size = 0);

/// Identity relabelling is the least encoding among per-sort permutations.
bool is_canonical(const Structure& m);

}  // namespace phl
