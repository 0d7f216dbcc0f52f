// Structure-preserving operators on staged trees.
//
// swap: acts on a "twin" — a situation whose children are all situations
// belonging to one common stage — and transposes the two levels.  The root
// keeps its identity and joins the children's stage; fresh middle nodes
// join the root's old stage; the subtree hanging below grid position (k, t)
// reattaches below position (t, k).  Everything outside the twin's two
// levels keeps its node id.
//
// resize_contract: one-level splice.  Given a stage u and a subset K of its
// edge positions whose children form, per position, exactly one whole stage
// ("conditionally saturated"), each member's K-children are spliced out;
// the member gains one edge per grandchild with the two labels joined, and
// grandchild subtrees reattach in place.  Deeper contractions are obtained
// by iterating.  There is no standalone expansion operator: an expansion is
// realised by replaying a recorded trace forward from the wider tree.
//
// Neither operator touches counts; re-derive them from data afterwards
// (see reroute_counts).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stagetree/staged_tree.hpp"

namespace stagetree {

// A swap site: the root situation of a two-level sub-structure whose
// children all lie in one stage.
struct Twin {
  int root = -1;         // node index of the twin root
  int child_stage = -1;  // stage index holding all of root's children
};

// All twins, ordered by breadth-first position of the root.
std::vector<Twin> find_twins(const StagedTree& st);

// Twin at a given node, if the node roots one.
std::optional<Twin> twin_at(const StagedTree& st, int root);

// A contraction site: stage index plus the edge positions to contract.
struct ResizeSpec {
  int stage = -1;
  std::vector<int> edges;  // positions k, each with a conditionally saturated child stage
};

// All contraction sites with maximal edge sets, ordered by stage index.
std::vector<ResizeSpec> find_contractions(const StagedTree& st);

// Validated maximal spec for one stage (empty edge list -> nullopt).
std::optional<ResizeSpec> contraction_at(const StagedTree& st, int stage);

// One recorded operator application, sufficient to replay it.
struct TransformStep {
  enum class Kind { swap, resize_contract };
  Kind kind = Kind::swap;
  std::string twin_root_id;              // swap: id of the twin root
  int stage = -1;                        // resize: stage index in the source staging
  std::vector<int> edges;                // resize: contracted edge positions
  // swap bookkeeping: original label grid of the twin, labels[k][t] being
  // the t-th label of the root's k-th child before transposition.
  std::vector<std::vector<std::string>> original_labels;
  // ids of nodes created (swap middle layer) / removed (resize children).
  std::vector<std::string> created_ids;
  std::vector<std::string> removed_ids;
};

struct TransformResult {
  StagedTree tree;
  TransformStep step;
};

// Transpose the two levels of the twin rooted at `twin.root`.
// ValidationError if the node roots no twin.
TransformResult swap(const StagedTree& st, const Twin& twin);

// Contract the given positions of the given stage (one-level splice).
// ValidationError if the spec's invariants fail.
TransformResult resize_contract(const StagedTree& st, const ResizeSpec& spec);

// Replay a recorded step on a tree (used to reproduce a target from a
// trace).  Expansion has no standalone operator; it is realised by replaying
// a trace forward from the less-contracted tree.
TransformResult apply_step(const StagedTree& st, const TransformStep& step);

}  // namespace stagetree
