#include "stagetree/dataset.hpp"

#include "stagetree/errors.hpp"

namespace stagetree {

EdgeCounts EdgeCounts::zeros(const EventTree& tree) {
  EdgeCounts counts;
  counts.n.resize(tree.nodes.size());
  for (int v = 0; v < tree.node_count(); ++v) {
    counts.n[static_cast<size_t>(v)].assign(tree.at(v).children.size(), 0);
  }
  return counts;
}

std::int64_t EdgeCounts::total(const EventTree& tree) const {
  std::int64_t sum = 0;
  for (std::int64_t c : n[static_cast<size_t>(tree.root)]) sum += c;
  return sum;
}

namespace {

// Advance one step: find the unique edge of v whose label sequence matches
// the record at position pos; returns (child, symbols consumed).
std::pair<int, size_t> step_record(const EventTree& tree, int v,
                                   const std::vector<std::string>& record, size_t pos) {
  const auto& node = tree.at(v);
  int match = -1;
  size_t match_len = 0;
  for (size_t k = 0; k < node.labels.size(); ++k) {
    auto parts = label_parts(node.labels[k]);
    if (pos + parts.size() > record.size()) continue;
    bool ok = true;
    for (size_t i = 0; i < parts.size(); ++i) {
      if (record[pos + i] != parts[i]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (match != -1) {
      throw RoutingError("routing: record matches two edges at node '" + node.id + "'");
    }
    match = static_cast<int>(k);
    match_len = parts.size();
  }
  if (match == -1) {
    throw RoutingError("routing: no edge at node '" + node.id + "' matches symbol '" +
                       (pos < record.size() ? record[pos] : std::string("<end of record>")) + "'");
  }
  return {match, match_len};
}

}  // namespace

std::vector<std::pair<int, int>> route_record(const EventTree& tree,
                                              const std::vector<std::string>& record) {
  std::vector<std::pair<int, int>> path;
  int v = tree.root;
  size_t pos = 0;
  while (!tree.at(v).is_leaf()) {
    auto [k, used] = step_record(tree, v, record, pos);
    path.emplace_back(v, k);
    pos += used;
    v = tree.at(v).children[static_cast<size_t>(k)];
  }
  if (pos != record.size()) {
    throw RoutingError("routing: record has leftover symbol '" + record[pos] + "' at leaf '" +
                       tree.at(v).id + "'");
  }
  return path;
}

EdgeCounts route_dataset(const EventTree& tree, const Dataset& data) {
  EdgeCounts counts = EdgeCounts::zeros(tree);
  for (size_t r = 0; r < data.records.size(); ++r) {
    try {
      for (auto [v, k] : route_record(tree, data.records[r])) {
        counts.n[static_cast<size_t>(v)][static_cast<size_t>(k)] += 1;
      }
    } catch (const RoutingError& e) {
      throw RoutingError("record " + std::to_string(r) + ": " + e.what());
    }
  }
  return counts;
}

std::map<std::string, std::int64_t> leaf_counts(const EventTree& tree, const EdgeCounts& counts) {
  std::map<std::string, std::int64_t> by_leaf;
  for (int v = 0; v < tree.node_count(); ++v) {
    const auto& node = tree.at(v);
    for (size_t k = 0; k < node.children.size(); ++k) {
      int c = node.children[k];
      if (tree.at(c).is_leaf()) by_leaf[tree.at(c).id] = counts.n[static_cast<size_t>(v)][k];
    }
  }
  // The root itself can never be a leaf in a valid tree, so every leaf has
  // an entering edge and the map covers all of them.
  return by_leaf;
}

EdgeCounts counts_from_leaf_counts(const EventTree& tree,
                                   const std::map<std::string, std::int64_t>& by_leaf) {
  std::vector<std::int64_t> below(tree.nodes.size(), 0);
  size_t matched = 0;
  for (int v = 0; v < tree.node_count(); ++v) {
    if (tree.at(v).is_leaf()) {
      auto it = by_leaf.find(tree.at(v).id);
      if (it == by_leaf.end()) {
        throw ValidationError("counts: no count for leaf '" + tree.at(v).id + "'");
      }
      below[static_cast<size_t>(v)] = it->second;
      ++matched;
    }
  }
  if (matched != by_leaf.size()) {
    throw ValidationError("counts: leaf ids do not match the tree");
  }
  auto order = tree.depth_first_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& node = tree.at(*it);
    if (!node.is_leaf()) {
      std::int64_t sum = 0;
      for (int c : node.children) sum += below[static_cast<size_t>(c)];
      below[static_cast<size_t>(*it)] = sum;
    }
  }
  EdgeCounts counts = EdgeCounts::zeros(tree);
  for (int v = 0; v < tree.node_count(); ++v) {
    const auto& node = tree.at(v);
    for (size_t k = 0; k < node.children.size(); ++k) {
      counts.n[static_cast<size_t>(v)][k] = below[static_cast<size_t>(node.children[k])];
    }
  }
  return counts;
}

EdgeCounts reroute_counts(const EventTree& source, const Dataset& data, const EventTree& target) {
  EdgeCounts routed = route_dataset(source, data);
  return counts_from_leaf_counts(target, leaf_counts(source, routed));
}

}  // namespace stagetree
