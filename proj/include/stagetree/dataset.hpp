// Datasets and edge counts.  A dataset is a list of records, each an
// ordered sequence of symbols; routing drives each record from the root
// along label-matching edges and increments every traversed edge.  Edge
// labels produced by contractions are comma-joined sequences and consume as
// many record symbols as they have components.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stagetree/event_tree.hpp"

namespace stagetree {

struct Dataset {
  std::vector<std::string> columns;                 // header names
  std::vector<std::vector<std::string>> records;    // one row per observation

  std::int64_t record_count() const { return static_cast<std::int64_t>(records.size()); }
};

// Per-edge observation counts, aligned with the tree shape:
// n[v][k] counts records that traversed edge (v, k).
struct EdgeCounts {
  std::vector<std::vector<std::int64_t>> n;

  static EdgeCounts zeros(const EventTree& tree);
  std::int64_t at(int v, int k) const { return n[static_cast<size_t>(v)][static_cast<size_t>(k)]; }
  // Total records = sum over the root's edges.
  std::int64_t total(const EventTree& tree) const;
};

// Drive one record from the root to a leaf.  At each situation exactly one
// outgoing edge's label sequence must equal the next record symbols (a
// composite label consumes one symbol per component).  Returns the
// traversed edges as (node, position) pairs.  Throws RoutingError naming
// the node and the offending symbol when no or several edges match, when
// the record runs out early, or when symbols remain at the leaf.
std::vector<std::pair<int, int>> route_record(const EventTree& tree,
                                              const std::vector<std::string>& record);

// Route every record and accumulate per-edge counts.
EdgeCounts route_dataset(const EventTree& tree, const Dataset& data);

// Counts keyed by the ids of leaf-entering edges' target leaves; the raw
// per-path form of an EdgeCounts.
std::map<std::string, std::int64_t> leaf_counts(const EventTree& tree, const EdgeCounts& counts);

// Rebuild full edge counts from per-leaf counts by summing each edge's
// descendant leaves.  Throws ValidationError if the ids do not cover the
// tree's leaves exactly.
EdgeCounts counts_from_leaf_counts(const EventTree& tree,
                                   const std::map<std::string, std::int64_t>& by_leaf);

// Re-derive counts on a transformed tree: route the data through the source
// tree, carry the per-leaf record counts across by leaf id (transformations
// preserve leaf ids), and integrate upward in the target tree.
EdgeCounts reroute_counts(const EventTree& source, const Dataset& data, const EventTree& target);

}  // namespace stagetree
