// Agglomerative hierarchical stage learning: start from the saturated
// staging and greedily apply the admissible stage merge with the best
// strictly positive score gain until none remains.  Admissible merges pair
// stages of equal out-degree; the level-indexed methods additionally
// require (and force) members on a single common level.
#pragma once

#include <cstdint>
#include <vector>

#include "stagetree/dataset.hpp"
#include "stagetree/hyper.hpp"
#include "stagetree/score.hpp"

namespace stagetree {

struct LearnConfig {
  double alpha = 1.0;
  Method method = Method::bdepu;
  bool same_level_only = false;      // forced on for the level-indexed methods
  bool enforce_square_free = false;  // reject merges putting two path-mates in a stage
};

struct MergeRecord {
  int stage_a = -1;       // indices in the staging *before* this merge
  int stage_b = -1;
  double score_after = 0; // full log score after the merge
};

struct LearnResult {
  StagedTree tree;                     // final staging
  double log_score = 0;                // score of the final staging
  double initial_score = 0;            // score of the saturated staging
  std::vector<MergeRecord> iterations; // strictly increasing score_after
};

LearnResult ahc_learn(const EventTree& tree, const Dataset& data, const LearnConfig& cfg);

// Variant starting from pre-routed counts.
LearnResult ahc_learn(const EventTree& tree, const EdgeCounts& counts, const LearnConfig& cfg);

// Local score change for merging two stages under the path-uniform rule,
// whose stage hyperparameters are member-additive so a merge touches only
// the two stages' own terms.  ValidationError for other methods.
double score_delta(const StagedTree& st, const EdgeCounts& counts, const HyperParams& h,
                   Method method, int stage_a, int stage_b);

}  // namespace stagetree
