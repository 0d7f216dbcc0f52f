// Staged trees: an event tree plus a partition of its situations into
// stages.  Stage membership aligns edges positionally (the k-th edge of
// every member refers to the same stage-level parameter), so all members of
// a stage must share an out-degree.  Optionally each stage carries a
// transition-probability vector over its edge positions.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stagetree/event_tree.hpp"

namespace stagetree {

struct StagedTree {
  EventTree tree;
  // stages[j] lists member situation node indices; together the stages
  // partition the situations.  Order of stages and of members is meaningful
  // for addressing (e.g. the CLI's --stage index) and kept stable.
  std::vector<std::vector<int>> stages;
  // Optional per-stage transition probabilities, aligned with edge
  // positions; present for all stages or not at all.
  std::optional<std::vector<std::vector<double>>> theta;

  int stage_count() const { return static_cast<int>(stages.size()); }

  // stage index per node; -1 for leaves.
  std::vector<int> stage_of_node() const;

  // Stage index of one situation (ValidationError for a leaf).
  int stage_of_node(int v) const;

  // Out-degree shared by the members of stage j.
  int stage_out_degree(int j) const;
};

// Construct with hard invariants enforced: stages must partition the
// situations, members of a stage must share an out-degree, theta (when
// present) must have one probability vector per stage with matching length,
// each summing to 1 within 1e-9.  Throws ValidationError otherwise.
StagedTree make_staged_tree(EventTree tree,
                            std::vector<std::vector<int>> stages,
                            std::optional<std::vector<std::vector<double>>> theta = std::nullopt);

// Saturated staging: every situation in its own singleton stage, in
// breadth-first order.
StagedTree saturated_staging(EventTree tree);

// Diagnostic report for the soft properties of a staged tree.
struct ValidationReport {
  bool partition_ok = false;        // stages partition the situations
  bool equal_out_degree_ok = false; // members of each stage share out-degree
  bool square_free = false;         // no stage holds two situations of one path
  bool stratified = false;          // underlying tree is variable-compatible
  // [min level, max level] spanned by each stage's members.
  std::vector<std::pair<int, int>> stage_level_span;
  // indices of stages whose members span more than one level
  std::vector<int> cross_level_stages;
  std::vector<std::string> problems; // human-readable notes for failures
};

// Report on an arbitrary staging (also usable on stagings that would fail
// construction, hence the raw pieces instead of a StagedTree).
ValidationReport validate_staged_tree(const EventTree& tree,
                                      const std::vector<std::vector<int>>& stages);

inline ValidationReport validate_staged_tree(const StagedTree& st) {
  return validate_staged_tree(st.tree, st.stages);
}

// True when every leaf sits at the same depth and, per level, all
// situations carry identical ordered label lists (i.e. the tree is the
// product tree of some variable sequence).
bool is_stratified(const EventTree& tree);

}  // namespace stagetree
