// Canonical relabeling and staged-tree isomorphism.
//
// canonicalize renames nodes breadth-first (situations "s0", "s1", ...;
// leaves "l1", "l2", ...; children visited in edge order), orders stage
// members by node position and stages by first member, so that two trees
// differing only in node ids and bookkeeping order produce byte-identical
// documents when saved.
//
// staged_tree_isomorphic looks for a root-preserving bijection of nodes
// mapping stages onto stages; sibling edge order may be permuted, with the
// permutation shared by all members of a stage (stage positions stay
// aligned) and recorded in the result.  Labels, counts and theta are
// structural payload, not part of the matching.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stagetree/dataset.hpp"
#include "stagetree/staged_tree.hpp"

namespace stagetree {

struct Isomorphism {
  // node_map[v] = matching node index in the second tree.
  std::vector<int> node_map;
  // edge_perm[v][k] = edge position in the second tree taken by the first
  // tree's edge (v, k); empty vector for leaves.
  std::vector<std::vector<int>> edge_perm;

  bool is_identity_relabeling(const StagedTree& a, const StagedTree& b) const;
};

std::optional<Isomorphism> staged_tree_isomorphic(const StagedTree& a, const StagedTree& b);

// Breadth-first canonical relabeling; shape, staging content, labels and
// theta are untouched.
StagedTree canonicalize(const StagedTree& st);

// Canonical relabeling applied consistently to a tree and its counts.
std::pair<StagedTree, EdgeCounts> canonicalize(const StagedTree& st, const EdgeCounts& counts);

}  // namespace stagetree
