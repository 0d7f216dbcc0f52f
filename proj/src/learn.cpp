#include "stagetree/learn.hpp"

#include <cmath>
#include <unordered_set>

#include "stagetree/errors.hpp"

namespace stagetree {

namespace {

// The two stage terms of the closed-form score touched by a merge.
double stage_term(const std::vector<double>& alpha, const std::vector<std::int64_t>& n) {
  double abar = 0;
  double nbar = 0;
  double term = 0;
  for (size_t k = 0; k < alpha.size(); ++k) {
    abar += alpha[k];
    nbar += static_cast<double>(n[k]);
    term += std::lgamma(alpha[k] + static_cast<double>(n[k])) - std::lgamma(alpha[k]);
  }
  return term + std::lgamma(abar) - std::lgamma(abar + nbar);
}

// All members of both stages on one common tree level?
bool merge_on_one_level(const StagedTree& st, int a, int b) {
  int level = -1;
  for (int j : {a, b}) {
    for (int v : st.stages[static_cast<size_t>(j)]) {
      int lv = st.tree.level_of(v);
      if (level == -1) level = lv;
      if (lv != level) return false;
    }
  }
  return true;
}

// Would the merged stage hold a situation and one of its ancestors?
bool merge_breaks_square_free(const StagedTree& st, int a, int b) {
  std::unordered_set<int> members;
  for (int j : {a, b}) {
    for (int v : st.stages[static_cast<size_t>(j)]) members.insert(v);
  }
  for (int v : members) {
    for (int p = st.tree.at(v).parent; p != -1; p = st.tree.at(p).parent) {
      if (members.count(p)) return true;
    }
  }
  return false;
}

std::vector<std::vector<int>> merged_staging(const std::vector<std::vector<int>>& stages, int a,
                                             int b) {
  std::vector<std::vector<int>> out;
  out.reserve(stages.size() - 1);
  for (size_t j = 0; j < stages.size(); ++j) {
    if (static_cast<int>(j) == b) continue;
    out.push_back(stages[j]);
    if (static_cast<int>(j) == a) {
      out.back().insert(out.back().end(), stages[static_cast<size_t>(b)].begin(),
                        stages[static_cast<size_t>(b)].end());
    }
  }
  return out;
}

}  // namespace

double score_delta(const StagedTree& st, const EdgeCounts& counts, const HyperParams& h,
                   Method method, int stage_a, int stage_b) {
  if (method != Method::bdepu) {
    throw ValidationError("score delta: only the path-uniform rule is merge-local; "
                          "re-score the full staging instead");
  }
  if (stage_a == stage_b) {
    throw ValidationError("score delta: a stage cannot merge with itself");
  }
  check_hyper_shape(st, h);
  const auto n = stage_counts(st, counts);
  const auto& aa = h.stage_edge[static_cast<size_t>(stage_a)];
  const auto& ab = h.stage_edge[static_cast<size_t>(stage_b)];
  const auto& na = n[static_cast<size_t>(stage_a)];
  const auto& nb = n[static_cast<size_t>(stage_b)];
  if (aa.size() != ab.size()) {
    throw ValidationError("score delta: stages have different out-degrees");
  }

  // Member-additivity of the rule makes the merged stage's hyperparameters
  // the element-wise sums, so only these two terms change.
  std::vector<double> am(aa.size());
  std::vector<std::int64_t> nm(aa.size());
  for (size_t k = 0; k < aa.size(); ++k) {
    am[k] = aa[k] + ab[k];
    nm[k] = na[k] + nb[k];
  }
  return stage_term(am, nm) - stage_term(aa, na) - stage_term(ab, nb);
}

LearnResult ahc_learn(const EventTree& tree, const EdgeCounts& counts, const LearnConfig& cfg) {
  const bool same_level = cfg.same_level_only || cfg.method != Method::bdepu;

  StagedTree st = saturated_staging(tree);
  HyperParams h = make_hyper(st, cfg.alpha, cfg.method);
  double score = bd_log_score(st, counts, h);

  LearnResult result;
  result.initial_score = score;

  while (true) {
    int best_a = -1;
    int best_b = -1;
    double best_gain = 0;

    for (int a = 0; a < st.stage_count(); ++a) {
      for (int b = a + 1; b < st.stage_count(); ++b) {
        if (st.stage_out_degree(a) != st.stage_out_degree(b)) continue;
        if (same_level && !merge_on_one_level(st, a, b)) continue;
        if (cfg.enforce_square_free && merge_breaks_square_free(st, a, b)) continue;

        double gain;
        if (cfg.method == Method::bdepu) {
          gain = score_delta(st, counts, h, cfg.method, a, b);
        } else {
          StagedTree merged = make_staged_tree(tree, merged_staging(st.stages, a, b));
          gain = bd_log_score(merged, counts, make_hyper(merged, cfg.alpha, cfg.method)) - score;
        }
        // Strictly better only; on ties the earliest (a, b) pair stands.
        if (gain > 0 && gain > best_gain) {
          best_gain = gain;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_a == -1) break;

    st = make_staged_tree(tree, merged_staging(st.stages, best_a, best_b));
    h = make_hyper(st, cfg.alpha, cfg.method);
    score = bd_log_score(st, counts, h);
    result.iterations.push_back(MergeRecord{best_a, best_b, score});
  }

  result.tree = std::move(st);
  result.log_score = score;
  return result;
}

LearnResult ahc_learn(const EventTree& tree, const Dataset& data, const LearnConfig& cfg) {
  return ahc_learn(tree, route_dataset(tree, data), cfg);
}

}  // namespace stagetree
