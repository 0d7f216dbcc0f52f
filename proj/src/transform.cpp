#include "stagetree/transform.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "stagetree/errors.hpp"

namespace stagetree {

namespace {

// Drop nodes flagged dead, remap every index, drop empty stages (with their
// theta rows), and run the full construction checks on the result.
StagedTree compact(const EventTree& tree, const std::vector<char>& dead,
                   const std::vector<std::vector<int>>& stages,
                   const std::optional<std::vector<std::vector<double>>>& theta) {
  std::vector<int> remap(tree.nodes.size(), -1);
  EventTree out;
  for (size_t v = 0; v < tree.nodes.size(); ++v) {
    if (dead[v]) continue;
    remap[v] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(tree.nodes[v]);
  }
  out.root = remap[static_cast<size_t>(tree.root)];
  for (auto& node : out.nodes) {
    if (node.parent != -1) node.parent = remap[static_cast<size_t>(node.parent)];
    for (int& c : node.children) c = remap[static_cast<size_t>(c)];
  }

  std::vector<std::vector<int>> out_stages;
  std::optional<std::vector<std::vector<double>>> out_theta;
  if (theta.has_value()) out_theta.emplace();
  for (size_t j = 0; j < stages.size(); ++j) {
    std::vector<int> members;
    for (int v : stages[j]) {
      if (!dead[static_cast<size_t>(v)]) members.push_back(remap[static_cast<size_t>(v)]);
    }
    if (members.empty()) continue;
    out_stages.push_back(std::move(members));
    if (out_theta.has_value()) out_theta->push_back((*theta)[j]);
  }

  check_event_tree(out);
  return make_staged_tree(out, out_stages, out_theta);
}

// Deterministic ids for nodes created by an operator: "m0", "m1", ... with
// already-taken names skipped.
std::vector<std::string> fresh_ids(const EventTree& tree, size_t count) {
  std::unordered_set<std::string> used;
  for (const auto& node : tree.nodes) used.insert(node.id);
  std::vector<std::string> ids;
  int next = 0;
  while (ids.size() < count) {
    std::string candidate = "m" + std::to_string(next++);
    if (used.count(candidate) == 0) ids.push_back(candidate);
  }
  return ids;
}

}  // namespace

std::optional<Twin> twin_at(const StagedTree& st, int root) {
  if (root < 0 || root >= st.tree.node_count()) return std::nullopt;
  const auto& node = st.tree.at(root);
  if (node.is_leaf()) return std::nullopt;
  int stage = -1;
  for (int c : node.children) {
    if (st.tree.at(c).is_leaf()) return std::nullopt;
    int s = st.stage_of_node(c);
    if (stage == -1) stage = s;
    if (s != stage) return std::nullopt;
  }
  // A root sharing its children's stage would leave the two-level exchange
  // with no second stage to land in; such staging is not square-free anyway.
  if (st.stage_of_node(root) == stage) return std::nullopt;
  return Twin{root, stage};
}

std::vector<Twin> find_twins(const StagedTree& st) {
  std::vector<Twin> twins;
  for (int v : st.tree.breadth_first_order()) {
    if (auto t = twin_at(st, v)) twins.push_back(*t);
  }
  return twins;
}

TransformResult swap(const StagedTree& st, const Twin& twin) {
  auto valid = twin_at(st, twin.root);
  if (!valid.has_value() || valid->child_stage != twin.child_stage) {
    throw ValidationError("swap: node does not root a twin with the given child stage");
  }

  const EventTree& tree = st.tree;
  const auto& root_node = tree.at(twin.root);
  const auto children = root_node.children;  // copy: the node will be rewritten
  const int r1 = static_cast<int>(children.size());
  const int r2 = tree.at(children.front()).out_degree();

  // Original two-level grid: grid[k][t] is the subtree hanging below the
  // root's k-th child via that child's t-th edge; labels[k][t] its label.
  std::vector<std::vector<int>> grid(static_cast<size_t>(r1));
  std::vector<std::vector<std::string>> labels(static_cast<size_t>(r1));
  for (int k = 0; k < r1; ++k) {
    const auto& child = tree.at(children[static_cast<size_t>(k)]);
    grid[static_cast<size_t>(k)] = child.children;
    labels[static_cast<size_t>(k)] = child.labels;
  }

  EventTree out = tree;
  auto ids = fresh_ids(tree, static_cast<size_t>(r2));
  std::vector<int> middles;
  for (int t = 0; t < r2; ++t) {
    EventTree::Node m;
    m.id = ids[static_cast<size_t>(t)];
    m.parent = twin.root;
    m.edge_in_parent = t;
    m.children.reserve(static_cast<size_t>(r1));
    m.labels = out.at(twin.root).labels;  // the old first-level labels move down
    middles.push_back(static_cast<int>(out.nodes.size()));
    out.nodes.push_back(std::move(m));
  }
  // The new first level carries the second level's alignment; labels are
  // taken positionally from the first child (members of one stage need not
  // share label text, so the original grid is recorded in the step).
  out.nodes[static_cast<size_t>(twin.root)].children = middles;
  out.nodes[static_cast<size_t>(twin.root)].labels = labels.front();
  for (int t = 0; t < r2; ++t) {
    auto& m = out.nodes[static_cast<size_t>(middles[static_cast<size_t>(t)])];
    for (int k = 0; k < r1; ++k) {
      int sub = grid[static_cast<size_t>(k)][static_cast<size_t>(t)];
      m.children.push_back(sub);
      out.nodes[static_cast<size_t>(sub)].parent = middles[static_cast<size_t>(t)];
      out.nodes[static_cast<size_t>(sub)].edge_in_parent = k;
    }
  }

  std::vector<char> dead(out.nodes.size(), 0);
  for (int c : children) dead[static_cast<size_t>(c)] = 1;

  // Stage exchange: the root moves into the children's stage (outside
  // members of either stage are retained), the fresh middle nodes take the
  // root's old place.
  const int root_stage = st.stage_of_node(twin.root);
  std::vector<std::vector<int>> stages = st.stages;
  auto& u = stages[static_cast<size_t>(twin.child_stage)];
  u.erase(std::remove_if(u.begin(), u.end(),
                         [&](int v) { return dead[static_cast<size_t>(v)] != 0; }),
          u.end());
  u.push_back(twin.root);
  auto& w = stages[static_cast<size_t>(root_stage)];
  w.erase(std::remove(w.begin(), w.end(), twin.root), w.end());
  for (int m : middles) w.push_back(m);

  TransformStep step;
  step.kind = TransformStep::Kind::swap;
  step.twin_root_id = tree.at(twin.root).id;
  step.original_labels = labels;
  step.created_ids = ids;
  for (int c : children) step.removed_ids.push_back(tree.at(c).id);

  return TransformResult{compact(out, dead, stages, st.theta), std::move(step)};
}

std::optional<ResizeSpec> contraction_at(const StagedTree& st, int stage) {
  if (stage < 0 || stage >= st.stage_count()) return std::nullopt;
  const auto& members = st.stages[static_cast<size_t>(stage)];
  const int degree = st.tree.at(members.front()).out_degree();

  ResizeSpec spec;
  spec.stage = stage;
  for (int k = 0; k < degree; ++k) {
    // Position k qualifies when the members' k-children are situations
    // forming, by themselves, one whole stage.
    std::set<int> kids;
    bool ok = true;
    for (int v : members) {
      int c = st.tree.at(v).children[static_cast<size_t>(k)];
      if (st.tree.at(c).is_leaf()) {
        ok = false;
        break;
      }
      kids.insert(c);
    }
    if (!ok) continue;
    int w = st.stage_of_node(*kids.begin());
    if (w == stage) continue;
    const auto& w_members = st.stages[static_cast<size_t>(w)];
    if (std::set<int>(w_members.begin(), w_members.end()) != kids) continue;
    spec.edges.push_back(k);
  }
  if (spec.edges.empty()) return std::nullopt;
  return spec;
}

std::vector<ResizeSpec> find_contractions(const StagedTree& st) {
  std::vector<ResizeSpec> specs;
  for (int j = 0; j < st.stage_count(); ++j) {
    if (auto spec = contraction_at(st, j)) specs.push_back(*spec);
  }
  return specs;
}

TransformResult resize_contract(const StagedTree& st, const ResizeSpec& spec) {
  if (spec.stage < 0 || spec.stage >= st.stage_count()) {
    throw ValidationError("resize: stage index out of range");
  }
  if (spec.edges.empty()) {
    throw ValidationError("resize: empty edge set");
  }
  auto maximal = contraction_at(st, spec.stage);
  std::vector<int> edges = spec.edges;
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ValidationError("resize: duplicate edge position");
  }
  for (int k : edges) {
    if (!maximal.has_value() ||
        !std::binary_search(maximal->edges.begin(), maximal->edges.end(), k)) {
      throw ValidationError("resize: edge position " + std::to_string(k) +
                            " of stage " + std::to_string(spec.stage) +
                            " has no conditionally saturated child stage");
    }
  }

  const EventTree& tree = st.tree;
  const auto& members = st.stages[static_cast<size_t>(spec.stage)];
  const int degree = tree.at(members.front()).out_degree();
  const auto in_k = [&](int k) {
    return std::binary_search(edges.begin(), edges.end(), k);
  };

  EventTree out = tree;
  std::vector<char> dead(out.nodes.size(), 0);
  TransformStep step;
  step.kind = TransformStep::Kind::resize_contract;
  step.stage = spec.stage;
  step.edges = edges;

  for (int v : members) {
    std::vector<int> new_children;
    std::vector<std::string> new_labels;
    for (int k = 0; k < degree; ++k) {
      int c = tree.at(v).children[static_cast<size_t>(k)];
      if (!in_k(k)) {
        new_children.push_back(c);
        new_labels.push_back(tree.at(v).labels[static_cast<size_t>(k)]);
        continue;
      }
      dead[static_cast<size_t>(c)] = 1;
      step.removed_ids.push_back(tree.at(c).id);
      const auto& mid = tree.at(c);
      for (size_t t = 0; t < mid.children.size(); ++t) {
        new_children.push_back(mid.children[t]);
        new_labels.push_back(
            join_label({tree.at(v).labels[static_cast<size_t>(k)], mid.labels[t]}));
      }
    }
    for (size_t pos = 0; pos < new_children.size(); ++pos) {
      out.nodes[static_cast<size_t>(new_children[pos])].parent = v;
      out.nodes[static_cast<size_t>(new_children[pos])].edge_in_parent = static_cast<int>(pos);
    }
    out.nodes[static_cast<size_t>(v)].children = std::move(new_children);
    out.nodes[static_cast<size_t>(v)].labels = std::move(new_labels);
  }

  // The spliced stages empty out and are dropped by compact(); the target
  // stage keeps its members with their widened florets.  A floret edge's
  // probability is the product along the contracted path.
  std::optional<std::vector<std::vector<double>>> theta = st.theta;
  if (theta.has_value()) {
    std::vector<double> row;
    const auto& u_row = (*theta)[static_cast<size_t>(spec.stage)];
    for (int k = 0; k < degree; ++k) {
      if (!in_k(k)) {
        row.push_back(u_row[static_cast<size_t>(k)]);
        continue;
      }
      int c = tree.at(members.front()).children[static_cast<size_t>(k)];
      const auto& w_row = (*theta)[static_cast<size_t>(st.stage_of_node(c))];
      for (double p : w_row) row.push_back(u_row[static_cast<size_t>(k)] * p);
    }
    (*theta)[static_cast<size_t>(spec.stage)] = std::move(row);
  }

  return TransformResult{compact(out, dead, st.stages, theta), std::move(step)};
}

TransformResult apply_step(const StagedTree& st, const TransformStep& step) {
  switch (step.kind) {
    case TransformStep::Kind::swap: {
      auto twin = twin_at(st, st.tree.index_of(step.twin_root_id));
      if (!twin.has_value()) {
        throw ValidationError("replay: node '" + step.twin_root_id + "' roots no twin");
      }
      return swap(st, *twin);
    }
    case TransformStep::Kind::resize_contract: {
      ResizeSpec spec;
      spec.stage = step.stage;
      spec.edges = step.edges;
      return resize_contract(st, spec);
    }
  }
  throw ValidationError("replay: unknown step kind");
}

}  // namespace stagetree
