#include "stagetree/score.hpp"

#include <cmath>

#include "stagetree/errors.hpp"

namespace stagetree {

std::vector<std::vector<std::int64_t>> stage_counts(const StagedTree& st,
                                                    const EdgeCounts& counts) {
  std::vector<std::vector<std::int64_t>> result(st.stages.size());
  for (size_t j = 0; j < st.stages.size(); ++j) {
    const auto& members = st.stages[j];
    std::vector<std::int64_t> stage(
        static_cast<size_t>(st.tree.at(members.front()).out_degree()), 0);
    for (int v : members) {
      for (size_t k = 0; k < stage.size(); ++k) {
        stage[k] += counts.at(v, static_cast<int>(k));
      }
    }
    result[j] = std::move(stage);
  }
  return result;
}

double bd_log_score(const StagedTree& st, const EdgeCounts& counts, const HyperParams& h) {
  check_hyper_shape(st, h);
  const auto n = stage_counts(st, counts);

  double score = 0;
  for (size_t j = 0; j < st.stages.size(); ++j) {
    double abar = 0;
    std::int64_t nbar = 0;
    for (size_t k = 0; k < n[j].size(); ++k) {
      double a = h.stage_edge[j][k];
      if (!(a > 0)) {
        throw ValidationError("log score: hyperparameter must be positive at stage " +
                              std::to_string(j) + " edge " + std::to_string(k));
      }
      abar += a;
      nbar += n[j][k];
      score += std::lgamma(a + static_cast<double>(n[j][k])) - std::lgamma(a);
    }
    score += std::lgamma(abar) - std::lgamma(abar + static_cast<double>(nbar));
  }
  return score;
}

double sequential_oracle_log_score(const StagedTree& st, const Dataset& data,
                                   const HyperParams& h) {
  check_hyper_shape(st, h);

  // Urn walk: each record's path contributes, per traversed edge, the current
  // predictive probability of that edge given everything seen so far at its
  // stage; the seen-counts then advance.  The product telescopes into the
  // closed-form score independently of record order.
  std::vector<std::vector<std::int64_t>> seen(h.stage_edge.size());
  std::vector<double> seen_total(h.stage_edge.size(), 0.0);
  std::vector<double> prior_total(h.stage_edge.size(), 0.0);
  for (size_t j = 0; j < h.stage_edge.size(); ++j) {
    seen[j].assign(h.stage_edge[j].size(), 0);
    for (double a : h.stage_edge[j]) prior_total[j] += a;
  }

  double logp = 0;
  for (const auto& record : data.records) {
    for (auto [v, k] : route_record(st.tree, record)) {
      size_t j = static_cast<size_t>(st.stage_of_node(v));
      size_t kk = static_cast<size_t>(k);
      double num = h.stage_edge[j][kk] + static_cast<double>(seen[j][kk]);
      double den = prior_total[j] + seen_total[j];
      logp += std::log(num / den);
      seen[j][kk] += 1;
      seen_total[j] += 1;
    }
  }
  return logp;
}

PosteriorParams stage_posterior(const StagedTree& st, const EdgeCounts& counts,
                                const HyperParams& h) {
  check_hyper_shape(st, h);
  const auto n = stage_counts(st, counts);

  PosteriorParams post;
  post.stage_edge.resize(st.stages.size());
  for (size_t j = 0; j < st.stages.size(); ++j) {
    post.stage_edge[j].resize(n[j].size());
    for (size_t k = 0; k < n[j].size(); ++k) {
      post.stage_edge[j][k] = h.stage_edge[j][k] + static_cast<double>(n[j][k]);
    }
  }
  return post;
}

}  // namespace stagetree
