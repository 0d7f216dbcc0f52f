#include "stagetree/canonical.hpp"

#include <algorithm>

#include "stagetree/errors.hpp"

namespace stagetree {

bool Isomorphism::is_identity_relabeling(const StagedTree& a, const StagedTree& b) const {
  for (int v = 0; v < a.tree.node_count(); ++v) {
    if (a.tree.at(v).id != b.tree.at(node_map[static_cast<size_t>(v)]).id) return false;
    const auto& perm = edge_perm[static_cast<size_t>(v)];
    for (size_t k = 0; k < perm.size(); ++k) {
      if (perm[k] != static_cast<int>(k)) return false;
    }
  }
  return true;
}

namespace {

// Backtracking state for the stage-aligned isomorphism search.  Edge
// positions are permuted per stage, not per node: the first member of a
// stage to be examined fixes entries of its stage's permutation, later
// members must follow them.
struct IsoSearch {
  const StagedTree& a;
  const StagedTree& b;
  std::vector<int> node_map;                // a-node -> b-node
  std::vector<int> stage_map;               // a-stage -> b-stage
  std::vector<char> stage_taken;            // b-stage already targeted
  std::vector<std::vector<int>> perm;       // per a-stage, position -> position
  std::vector<std::vector<char>> perm_taken;
  std::vector<int> order;                   // a-situations, breadth-first

  IsoSearch(const StagedTree& a_, const StagedTree& b_) : a(a_), b(b_) {
    node_map.assign(a.tree.nodes.size(), -1);
    stage_map.assign(a.stages.size(), -1);
    stage_taken.assign(b.stages.size(), 0);
    perm.resize(a.stages.size());
    perm_taken.resize(a.stages.size());
    for (size_t j = 0; j < a.stages.size(); ++j) {
      size_t degree = static_cast<size_t>(a.tree.at(a.stages[j].front()).out_degree());
      perm[j].assign(degree, -1);
      perm_taken[j].assign(degree, 0);
    }
    for (int v : a.tree.breadth_first_order()) {
      if (!a.tree.at(v).is_leaf()) order.push_back(v);
    }
  }

  // Can a-node x map to b-node y, as far as locally visible?
  bool compatible(int x, int y) const {
    const auto& nx = a.tree.at(x);
    const auto& ny = b.tree.at(y);
    if (nx.is_leaf() != ny.is_leaf()) return false;
    if (nx.out_degree() != ny.out_degree()) return false;
    if (!nx.is_leaf()) {
      int jx = a.stage_of_node(x);
      int jy = b.stage_of_node(y);
      if (stage_map[static_cast<size_t>(jx)] != -1 &&
          stage_map[static_cast<size_t>(jx)] != jy) {
        return false;
      }
      if (stage_map[static_cast<size_t>(jx)] == -1 && stage_taken[static_cast<size_t>(jy)]) {
        return false;
      }
    }
    return true;
  }

  bool run(size_t at, int edge) {
    if (at == order.size()) return true;
    int v = order[at];
    int j = a.stage_of_node(v);
    int image = node_map[static_cast<size_t>(v)];

    if (edge == 0) {
      // First visit of this situation: bind its stage to the image's stage.
      int jb = b.stage_of_node(image);
      if (stage_map[static_cast<size_t>(j)] == -1) {
        if (stage_taken[static_cast<size_t>(jb)]) return false;
        if (a.stages[static_cast<size_t>(j)].size() != b.stages[static_cast<size_t>(jb)].size()) {
          return false;
        }
        stage_map[static_cast<size_t>(j)] = jb;
        stage_taken[static_cast<size_t>(jb)] = 1;
        bool ok = run(at, 1);
        if (!ok) {
          stage_map[static_cast<size_t>(j)] = -1;
          stage_taken[static_cast<size_t>(jb)] = 0;
        }
        return ok;
      }
      if (stage_map[static_cast<size_t>(j)] != jb) return false;
      return run(at, 1);
    }

    int k = edge - 1;
    if (k == a.tree.at(v).out_degree()) return run(at + 1, 0);

    int child = a.tree.at(v).children[static_cast<size_t>(k)];
    if (perm[static_cast<size_t>(j)][static_cast<size_t>(k)] != -1) {
      int t = perm[static_cast<size_t>(j)][static_cast<size_t>(k)];
      int target = b.tree.at(image).children[static_cast<size_t>(t)];
      if (!compatible(child, target)) return false;
      node_map[static_cast<size_t>(child)] = target;
      bool ok = run(at, edge + 1);
      if (!ok) node_map[static_cast<size_t>(child)] = -1;
      return ok;
    }
    for (int t = 0; t < a.tree.at(v).out_degree(); ++t) {
      if (perm_taken[static_cast<size_t>(j)][static_cast<size_t>(t)]) continue;
      int target = b.tree.at(image).children[static_cast<size_t>(t)];
      if (!compatible(child, target)) continue;
      perm[static_cast<size_t>(j)][static_cast<size_t>(k)] = t;
      perm_taken[static_cast<size_t>(j)][static_cast<size_t>(t)] = 1;
      node_map[static_cast<size_t>(child)] = target;
      if (run(at, edge + 1)) return true;
      node_map[static_cast<size_t>(child)] = -1;
      perm[static_cast<size_t>(j)][static_cast<size_t>(k)] = -1;
      perm_taken[static_cast<size_t>(j)][static_cast<size_t>(t)] = 0;
    }
    return false;
  }
};

}  // namespace

std::optional<Isomorphism> staged_tree_isomorphic(const StagedTree& a, const StagedTree& b) {
  if (a.tree.node_count() != b.tree.node_count()) return std::nullopt;
  if (a.tree.leaf_count() != b.tree.leaf_count()) return std::nullopt;
  if (a.stage_count() != b.stage_count()) return std::nullopt;

  IsoSearch search(a, b);
  if (!search.compatible(a.tree.root, b.tree.root)) return std::nullopt;
  search.node_map[static_cast<size_t>(a.tree.root)] = b.tree.root;
  if (!search.run(0, 0)) return std::nullopt;

  Isomorphism iso;
  iso.node_map = std::move(search.node_map);
  iso.edge_perm.resize(a.tree.nodes.size());
  for (int v = 0; v < a.tree.node_count(); ++v) {
    if (!a.tree.at(v).is_leaf()) {
      iso.edge_perm[static_cast<size_t>(v)] =
          search.perm[static_cast<size_t>(a.stage_of_node(v))];
    }
  }
  return iso;
}

namespace {

// Node order and index remap for the breadth-first rebuild.
std::vector<int> bfs_positions(const EventTree& tree, std::vector<int>& order) {
  order = tree.breadth_first_order();
  std::vector<int> position(tree.nodes.size(), -1);
  for (size_t i = 0; i < order.size(); ++i) position[static_cast<size_t>(order[i])] = static_cast<int>(i);
  return position;
}

}  // namespace

StagedTree canonicalize(const StagedTree& st) {
  std::vector<int> order;
  std::vector<int> position = bfs_positions(st.tree, order);

  EventTree out;
  out.root = 0;
  out.nodes.reserve(st.tree.nodes.size());
  int situation_seq = 0;
  int leaf_seq = 0;
  for (int v : order) {
    EventTree::Node node = st.tree.at(v);
    if (node.parent != -1) node.parent = position[static_cast<size_t>(node.parent)];
    for (int& c : node.children) c = position[static_cast<size_t>(c)];
    node.id = node.is_leaf() ? "l" + std::to_string(++leaf_seq)
                             : "s" + std::to_string(situation_seq++);
    out.nodes.push_back(std::move(node));
  }

  std::vector<std::vector<int>> stages = st.stages;
  std::vector<size_t> stage_order(stages.size());
  for (size_t j = 0; j < stages.size(); ++j) {
    for (int& v : stages[j]) v = position[static_cast<size_t>(v)];
    std::sort(stages[j].begin(), stages[j].end());
    stage_order[j] = j;
  }
  std::sort(stage_order.begin(), stage_order.end(),
            [&](size_t x, size_t y) { return stages[x].front() < stages[y].front(); });

  std::vector<std::vector<int>> sorted_stages;
  std::optional<std::vector<std::vector<double>>> sorted_theta;
  if (st.theta.has_value()) sorted_theta.emplace();
  for (size_t j : stage_order) {
    sorted_stages.push_back(std::move(stages[j]));
    if (sorted_theta.has_value()) sorted_theta->push_back((*st.theta)[j]);
  }
  return make_staged_tree(out, sorted_stages, sorted_theta);
}

std::pair<StagedTree, EdgeCounts> canonicalize(const StagedTree& st, const EdgeCounts& counts) {
  std::vector<int> order;
  std::vector<int> position = bfs_positions(st.tree, order);

  EdgeCounts out;
  out.n.resize(counts.n.size());
  for (size_t v = 0; v < counts.n.size(); ++v) {
    out.n[static_cast<size_t>(position[v])] = counts.n[v];
  }
  return {canonicalize(st), std::move(out)};
}

}  // namespace stagetree
