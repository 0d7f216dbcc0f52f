// Marginal-likelihood scoring.  The closed form is the stage-wise product
// of Dirichlet-multinomial masses, evaluated in log space; the sequential
// form walks the data record by record through predictive probabilities and
// must agree with the closed form to floating-point accuracy.
#pragma once

#include <vector>

#include "stagetree/dataset.hpp"
#include "stagetree/hyper.hpp"
#include "stagetree/staged_tree.hpp"

namespace stagetree {

// Stage-level counts: aggregate edge counts over each stage's members.
std::vector<std::vector<std::int64_t>> stage_counts(const StagedTree& st, const EdgeCounts& counts);

// Closed-form log score:
//   sum over stages j of
//     lgamma(abar_j) - lgamma(abar_j + nbar_j)
//     + sum over edge positions k of lgamma(a_jk + n_jk) - lgamma(a_jk).
double bd_log_score(const StagedTree& st, const EdgeCounts& counts, const HyperParams& h);

// Sequential predictive log score: processes records in order; every
// traversed edge contributes log((a_jk + seen_jk) / (abar_j + seen_j)) and
// then advances the seen counts, one transition at a time.  Independent of
// record order; equals bd_log_score on the routed counts.
double sequential_oracle_log_score(const StagedTree& st, const Dataset& data,
                                   const HyperParams& h);

// Posterior Dirichlet parameters per stage: a_jk + n_jk.
struct PosteriorParams {
  std::vector<std::vector<double>> stage_edge;
};

PosteriorParams stage_posterior(const StagedTree& st, const EdgeCounts& counts,
                                const HyperParams& h);

}  // namespace stagetree
