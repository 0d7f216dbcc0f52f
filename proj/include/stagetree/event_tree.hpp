// Event trees: rooted directed trees whose non-leaf nodes ("situations")
// carry an ordered, labelled list of outgoing edges.  Nodes are addressed by
// dense integer indices; every node also carries a stable opaque string id
// that survives transformations and serialization.  Edges are addressed as
// (node, k) pairs, k being the position in the node's edge list.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stagetree {

struct EventTree {
  struct Node {
    std::string id;                    // stable opaque identifier
    int parent = -1;                   // -1 for the root
    int edge_in_parent = -1;           // index of the incoming edge at parent
    std::vector<int> children;         // child node index per outgoing edge
    std::vector<std::string> labels;   // label per outgoing edge

    bool is_leaf() const { return children.empty(); }
    int out_degree() const { return static_cast<int>(children.size()); }
  };

  std::vector<Node> nodes;
  int root = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  const Node& at(int v) const { return nodes[static_cast<size_t>(v)]; }
  Node& at(int v) { return nodes[static_cast<size_t>(v)]; }

  // Number of edges on the path from the root to v.
  int level_of(int v) const;

  // Node index for an id; throws ValidationError when absent.
  int index_of(const std::string& id) const;

  // Node indices in breadth-first order (children visited in edge order).
  std::vector<int> breadth_first_order() const;

  // Node indices in depth-first (pre)order, children in edge order.
  std::vector<int> depth_first_order() const;

  // All situation (non-leaf) node indices, in index order.
  std::vector<int> situations() const;

  int leaf_count() const;

  // Per-node count of leaves in the subtree rooted there (1 for leaves).
  std::vector<std::int64_t> leaves_below() const;
};

// A named variable with its ordered list of states.
struct Variable {
  std::string name;
  std::vector<std::string> states;
};

// Cartesian-product event tree: level i branches on variables[i]'s states,
// in order, for every node of that level.
EventTree build_product_tree(const std::vector<Variable>& variables);

// Tree from explicit root-to-leaf label paths.  Edge order at each node is
// first-appearance order in the input.  Duplicate paths, or a path that is a
// proper prefix of another, are validation errors.
EventTree build_tree_from_paths(const std::vector<std::vector<std::string>>& paths);

// Number of root-to-leaf paths through the edge (v, k).
std::int64_t path_count(const EventTree& tree, int v, int k);

// Split a (possibly composite, ", "-joined) edge label into its parts.
std::vector<std::string> label_parts(const std::string& label);

// Inverse of label_parts.
std::string join_label(const std::vector<std::string>& parts);

// Structural soundness check used by builders and the loader: connectivity,
// parent/child symmetry, label/child list alignment, comma-free labels,
// sibling label uniqueness.  Throws ValidationError with a description.
void check_event_tree(const EventTree& tree);

}  // namespace stagetree
