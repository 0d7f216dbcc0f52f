#include "stagetree/event_tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "stagetree/errors.hpp"

namespace stagetree {

int EventTree::level_of(int v) const {
  int depth = 0;
  for (int cur = v; at(cur).parent != -1; cur = at(cur).parent) ++depth;
  return depth;
}

int EventTree::index_of(const std::string& id) const {
  for (int v = 0; v < node_count(); ++v) {
    if (nodes[static_cast<size_t>(v)].id == id) return v;
  }
  throw ValidationError("index_of: no node with id '" + id + "'");
}

std::vector<int> EventTree::breadth_first_order() const {
  std::vector<int> order;
  order.reserve(nodes.size());
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (int c : at(v).children) queue.push_back(c);
  }
  return order;
}

std::vector<int> EventTree::depth_first_order() const {
  std::vector<int> order;
  order.reserve(nodes.size());
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = at(v).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

std::vector<int> EventTree::situations() const {
  std::vector<int> out;
  for (int v = 0; v < node_count(); ++v) {
    if (!at(v).is_leaf()) out.push_back(v);
  }
  return out;
}

int EventTree::leaf_count() const {
  int n = 0;
  for (const auto& node : nodes) {
    if (node.is_leaf()) ++n;
  }
  return n;
}

std::vector<std::int64_t> EventTree::leaves_below() const {
  std::vector<std::int64_t> below(nodes.size(), 0);
  auto order = depth_first_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& node = at(*it);
    if (node.is_leaf()) {
      below[static_cast<size_t>(*it)] = 1;
    } else {
      std::int64_t sum = 0;
      for (int c : node.children) sum += below[static_cast<size_t>(c)];
      below[static_cast<size_t>(*it)] = sum;
    }
  }
  return below;
}

EventTree build_product_tree(const std::vector<Variable>& variables) {
  for (const auto& var : variables) {
    if (var.states.empty()) {
      throw ValidationError("build_product_tree: variable '" + var.name + "' has no states");
    }
    std::set<std::string> distinct(var.states.begin(), var.states.end());
    if (distinct.size() != var.states.size()) {
      throw ValidationError("build_product_tree: variable '" + var.name +
                            "' repeats a state label");
    }
  }

  EventTree tree;
  tree.nodes.push_back({});
  tree.root = 0;
  // Grow level by level so ids come out in breadth-first order.
  std::vector<int> frontier{0};
  int situation_seq = 0;
  for (size_t level = 0; level < variables.size(); ++level) {
    const auto& states = variables[level].states;
    std::vector<int> next;
    for (int v : frontier) {
      tree.at(v).id = "s" + std::to_string(situation_seq++);
      for (size_t k = 0; k < states.size(); ++k) {
        int child = tree.node_count();
        tree.nodes.push_back({});
        tree.at(child).parent = v;
        tree.at(child).edge_in_parent = static_cast<int>(k);
        tree.at(v).children.push_back(child);
        tree.at(v).labels.push_back(states[k]);
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  int leaf_seq = 1;
  for (int v : frontier) tree.at(v).id = "l" + std::to_string(leaf_seq++);
  check_event_tree(tree);
  return tree;
}

EventTree build_tree_from_paths(const std::vector<std::vector<std::string>>& paths) {
  if (paths.empty()) throw ValidationError("build_tree_from_paths: no paths given");

  EventTree tree;
  tree.nodes.push_back({});
  tree.root = 0;
  std::set<std::vector<std::string>> seen;
  std::unordered_set<int> endpoints;  // nodes where an inserted path ends
  for (const auto& path : paths) {
    if (path.empty()) throw ValidationError("build_tree_from_paths: empty path");
    if (!seen.insert(path).second) {
      std::string flat;
      for (const auto& s : path) flat += (flat.empty() ? "" : ",") + s;
      throw ValidationError("build_tree_from_paths: duplicate path [" + flat + "]");
    }
    int v = tree.root;
    for (const auto& symbol : path) {
      if (endpoints.count(v)) {
        throw ValidationError("build_tree_from_paths: a path extends past the end of another");
      }
      const auto& labels = tree.at(v).labels;
      auto pos = std::find(labels.begin(), labels.end(), symbol);
      if (pos == labels.end()) {
        int child = tree.node_count();
        tree.nodes.push_back({});
        tree.at(child).parent = v;
        tree.at(child).edge_in_parent = tree.at(v).out_degree();
        tree.at(v).children.push_back(child);
        tree.at(v).labels.push_back(symbol);
        v = child;
      } else {
        v = tree.at(v).children[static_cast<size_t>(pos - labels.begin())];
      }
    }
    if (!tree.at(v).is_leaf()) {
      throw ValidationError("build_tree_from_paths: a path stops at another path's midpoint");
    }
    endpoints.insert(v);
  }

  // Breadth-first ids: situations s0, s1, ...; leaves l1, l2, ...
  int situation_seq = 0;
  int leaf_seq = 1;
  for (int v : tree.breadth_first_order()) {
    tree.at(v).id = tree.at(v).is_leaf() ? "l" + std::to_string(leaf_seq++)
                                         : "s" + std::to_string(situation_seq++);
  }
  check_event_tree(tree);
  return tree;
}

std::int64_t path_count(const EventTree& tree, int v, int k) {
  if (v < 0 || v >= tree.node_count()) throw ValidationError("path_count: node out of range");
  if (k < 0 || k >= tree.at(v).out_degree()) throw ValidationError("path_count: edge out of range");
  return tree.leaves_below()[static_cast<size_t>(tree.at(v).children[static_cast<size_t>(k)])];
}

std::vector<std::string> label_parts(const std::string& label) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t comma = label.find(", ", start);
    if (comma == std::string::npos) {
      parts.push_back(label.substr(start));
      return parts;
    }
    parts.push_back(label.substr(start, comma - start));
    start = comma + 2;
  }
}

std::string join_label(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out += ", ";
    out += part;
  }
  return out;
}

void check_event_tree(const EventTree& tree) {
  if (tree.nodes.empty()) throw ValidationError("event tree: no nodes");
  if (tree.root < 0 || tree.root >= tree.node_count()) {
    throw ValidationError("event tree: root index out of range");
  }
  if (tree.at(tree.root).parent != -1) throw ValidationError("event tree: root has a parent");

  std::unordered_set<std::string> ids;
  for (int v = 0; v < tree.node_count(); ++v) {
    const auto& node = tree.at(v);
    if (node.id.empty()) throw ValidationError("event tree: node without id");
    if (!ids.insert(node.id).second) {
      throw ValidationError("event tree: duplicate node id '" + node.id + "'");
    }
    if (node.children.size() != node.labels.size()) {
      throw ValidationError("event tree: node '" + node.id + "' has mismatched child/label lists");
    }
    std::set<std::string> sibling_labels;
    for (size_t k = 0; k < node.children.size(); ++k) {
      const std::string& label = node.labels[k];
      if (label.empty()) {
        throw ValidationError("event tree: empty edge label at node '" + node.id + "'");
      }
      // Labels may be composite (", "-joined by contraction) but each
      // component must be non-empty and comma-free, so routing can split
      // them back unambiguously.
      for (const auto& part : label_parts(label)) {
        if (part.empty() || part.find(',') != std::string::npos) {
          throw ValidationError("event tree: malformed label '" + label + "' at node '" + node.id +
                                "'");
        }
      }
      if (!sibling_labels.insert(label).second) {
        throw ValidationError("event tree: node '" + node.id + "' repeats sibling label '" + label +
                              "'");
      }
      int c = node.children[k];
      if (c < 0 || c >= tree.node_count()) {
        throw ValidationError("event tree: node '" + node.id + "' has child index out of range");
      }
      if (tree.at(c).parent != v || tree.at(c).edge_in_parent != static_cast<int>(k)) {
        throw ValidationError("event tree: parent/child links inconsistent at node '" + node.id +
                              "'");
      }
    }
  }
  if (tree.breadth_first_order().size() != tree.nodes.size()) {
    throw ValidationError("event tree: not a single connected tree");
  }
}

}  // namespace stagetree
