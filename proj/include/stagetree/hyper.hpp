// Hyperparameter assignment rules for the Bayes-Dirichlet stage metric.
// All rules spread a single global mass `alpha` over the tree's stage/edge
// positions; they differ in how the mass propagates:
//
//   bdepu        — path-uniform: an edge's hyperparameter is alpha/L times
//                  the number of root-to-leaf paths through it, summed over
//                  stage members (L = number of leaves).  Backward, purely
//                  structural, independent of the staging of other nodes.
//   csbdeu       — level-indexed forward flow: the root holds alpha; a
//                  stage's incoming mass divides equally over its edge
//                  positions.  Requires level-confined stages.
//   alt rules    — two per-level alternatives: mass split evenly per
//                  situation of a level, or evenly per edge leaving a level.
#pragma once

#include <string>
#include <vector>

#include "stagetree/staged_tree.hpp"

namespace stagetree {

enum class Method {
  bdepu,
  csbdeu,
  csbdeu_alt_situation,  // per-situation even split within a level
  csbdeu_alt_edge,       // per-edge even split within a level
};

Method method_from_string(const std::string& name);     // ValidationError on unknown
std::string method_to_string(Method m);

// Stage-level hyperparameters: one vector per stage, aligned with edge
// positions, plus the global mass they were built from.
struct HyperParams {
  double alpha = 0.0;
  std::vector<std::vector<double>> stage_edge;  // [stage][edge position]

  double stage_total(int j) const;
};

// Path-uniform rule (score-equivalent under swap/resize).
HyperParams bdepu_hyper(const StagedTree& st, double alpha);

// Level-indexed forward-flow rule.  Throws ValidationError when a stage
// spans more than one level.
HyperParams csbdeu_hyper(const StagedTree& st, double alpha);

enum class AltRule { per_situation, per_edge };

// The two per-level alternatives.  Same level-confinement requirement.
HyperParams csbdeu_alt_hyper(const StagedTree& st, double alpha, AltRule rule);

// Dispatch by method.
HyperParams make_hyper(const StagedTree& st, double alpha, Method m);

// Checks hyper shape against the staging; ValidationError on mismatch.
void check_hyper_shape(const StagedTree& st, const HyperParams& h);

}  // namespace stagetree
