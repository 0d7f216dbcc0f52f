#include "stagetree/staged_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stagetree/errors.hpp"

namespace stagetree {

std::vector<int> StagedTree::stage_of_node() const {
  std::vector<int> stage_of(tree.nodes.size(), -1);
  for (int j = 0; j < stage_count(); ++j) {
    for (int v : stages[static_cast<size_t>(j)]) stage_of[static_cast<size_t>(v)] = j;
  }
  return stage_of;
}

int StagedTree::stage_of_node(int v) const {
  for (int j = 0; j < stage_count(); ++j) {
    for (int member : stages[static_cast<size_t>(j)]) {
      if (member == v) return j;
    }
  }
  throw ValidationError("stage_of_node: node '" + tree.at(v).id + "' is in no stage");
}

int StagedTree::stage_out_degree(int j) const {
  const auto& members = stages[static_cast<size_t>(j)];
  return tree.at(members.front()).out_degree();
}

StagedTree make_staged_tree(EventTree tree, std::vector<std::vector<int>> stages,
                            std::optional<std::vector<std::vector<double>>> theta) {
  check_event_tree(tree);

  std::vector<int> seen(tree.nodes.size(), 0);
  for (size_t j = 0; j < stages.size(); ++j) {
    const auto& members = stages[j];
    if (members.empty()) throw ValidationError("staging: empty stage");
    int degree = -1;
    for (int v : members) {
      if (v < 0 || v >= tree.node_count()) throw ValidationError("staging: member out of range");
      if (tree.at(v).is_leaf()) {
        throw ValidationError("staging: leaf '" + tree.at(v).id + "' listed in a stage");
      }
      if (seen[static_cast<size_t>(v)]++) {
        throw ValidationError("staging: situation '" + tree.at(v).id + "' in two stages");
      }
      if (degree == -1) {
        degree = tree.at(v).out_degree();
      } else if (tree.at(v).out_degree() != degree) {
        throw ValidationError("staging: stage " + std::to_string(j) +
                              " mixes out-degrees " + std::to_string(degree) + " and " +
                              std::to_string(tree.at(v).out_degree()));
      }
    }
  }
  for (int v = 0; v < tree.node_count(); ++v) {
    if (!tree.at(v).is_leaf() && !seen[static_cast<size_t>(v)]) {
      throw ValidationError("staging: situation '" + tree.at(v).id + "' not covered by any stage");
    }
  }

  if (theta) {
    if (theta->size() != stages.size()) {
      throw ValidationError("theta: need one probability vector per stage");
    }
    for (size_t j = 0; j < theta->size(); ++j) {
      const auto& probs = (*theta)[j];
      if (probs.size() != static_cast<size_t>(tree.at(stages[j].front()).out_degree())) {
        throw ValidationError("theta: vector length mismatch at stage " + std::to_string(j));
      }
      double sum = 0;
      for (double p : probs) {
        if (p < 0) throw ValidationError("theta: negative probability at stage " + std::to_string(j));
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("theta: stage " + std::to_string(j) + " probabilities sum to " +
                              std::to_string(sum));
      }
    }
  }

  StagedTree st;
  st.tree = std::move(tree);
  st.stages = std::move(stages);
  st.theta = std::move(theta);
  return st;
}

StagedTree saturated_staging(EventTree tree) {
  std::vector<std::vector<int>> stages;
  for (int v : tree.breadth_first_order()) {
    if (!tree.at(v).is_leaf()) stages.push_back({v});
  }
  return make_staged_tree(std::move(tree), std::move(stages));
}

bool is_stratified(const EventTree& tree) {
  // Uniform leaf depth and, per level, one shared ordered label list.
  std::map<int, std::vector<std::string>> level_labels;
  int leaf_depth = -1;
  for (int v = 0; v < tree.node_count(); ++v) {
    int level = tree.level_of(v);
    if (tree.at(v).is_leaf()) {
      if (leaf_depth == -1) leaf_depth = level;
      if (level != leaf_depth) return false;
    } else {
      auto [it, inserted] = level_labels.emplace(level, tree.at(v).labels);
      if (!inserted && it->second != tree.at(v).labels) return false;
    }
  }
  // A situation on the leaves' level (can't happen in a tree, but keep the
  // check symmetric): every situation level must be above every leaf.
  for (const auto& [level, labels] : level_labels) {
    if (level >= leaf_depth) return false;
  }
  return true;
}

ValidationReport validate_staged_tree(const EventTree& tree,
                                      const std::vector<std::vector<int>>& stages) {
  ValidationReport report;
  check_event_tree(tree);

  // Partition check.
  report.partition_ok = true;
  std::vector<int> seen(tree.nodes.size(), 0);
  for (const auto& members : stages) {
    if (members.empty()) {
      report.partition_ok = false;
      report.problems.push_back("empty stage");
      continue;
    }
    for (int v : members) {
      if (v < 0 || v >= tree.node_count() || tree.at(v).is_leaf()) {
        report.partition_ok = false;
        report.problems.push_back("stage member is not a situation");
      } else if (seen[static_cast<size_t>(v)]++) {
        report.partition_ok = false;
        report.problems.push_back("situation '" + tree.at(v).id + "' in two stages");
      }
    }
  }
  for (int v = 0; v < tree.node_count(); ++v) {
    if (!tree.at(v).is_leaf() && !seen[static_cast<size_t>(v)]) {
      report.partition_ok = false;
      report.problems.push_back("situation '" + tree.at(v).id + "' not in any stage");
    }
  }

  // Equal out-degree per stage.
  report.equal_out_degree_ok = true;
  for (size_t j = 0; j < stages.size(); ++j) {
    for (int v : stages[j]) {
      if (v < 0 || v >= tree.node_count() || tree.at(v).is_leaf()) continue;
      if (tree.at(v).out_degree() != tree.at(stages[j].front()).out_degree()) {
        report.equal_out_degree_ok = false;
        report.problems.push_back("stage " + std::to_string(j) + " mixes out-degrees");
        break;
      }
    }
  }

  // Square-freeness: no stage may contain an ancestor-descendant pair.
  report.square_free = true;
  for (size_t j = 0; j < stages.size() && report.square_free; ++j) {
    std::set<int> members(stages[j].begin(), stages[j].end());
    for (int v : stages[j]) {
      for (int cur = (v >= 0 && v < tree.node_count()) ? tree.at(v).parent : -1; cur != -1;
           cur = tree.at(cur).parent) {
        if (members.count(cur)) {
          report.square_free = false;
          report.problems.push_back("stage " + std::to_string(j) +
                                    " holds two situations of one path ('" + tree.at(cur).id +
                                    "' above '" + tree.at(v).id + "')");
          break;
        }
      }
      if (!report.square_free) break;
    }
  }

  report.stratified = is_stratified(tree);

  // Level spans.
  for (size_t j = 0; j < stages.size(); ++j) {
    int lo = -1;
    int hi = -1;
    for (int v : stages[j]) {
      if (v < 0 || v >= tree.node_count()) continue;
      int level = tree.level_of(v);
      lo = (lo == -1) ? level : std::min(lo, level);
      hi = (hi == -1) ? level : std::max(hi, level);
    }
    report.stage_level_span.emplace_back(lo, hi);
    if (lo != hi) report.cross_level_stages.push_back(static_cast<int>(j));
  }

  return report;
}

}  // namespace stagetree
