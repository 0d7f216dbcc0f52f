// Bounded breadth-first search for an operator sequence connecting two
// staged trees.  Moves are swaps and contractions applied to the first
// tree; states are deduplicated by a canonical-serialization hash; success
// is isomorphism with the second tree.  An empty result means only
// "not found within the budget", never non-equivalence.
#pragma once

#include <optional>
#include <vector>

#include "stagetree/transform.hpp"

namespace stagetree {

std::optional<std::vector<TransformStep>> bounded_equivalence_search(const StagedTree& a,
                                                                     const StagedTree& b,
                                                                     int max_ops);

}  // namespace stagetree
