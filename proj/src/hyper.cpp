#include "stagetree/hyper.hpp"

#include <map>

#include "stagetree/errors.hpp"

namespace stagetree {

Method method_from_string(const std::string& name) {
  if (name == "bdepu") return Method::bdepu;
  if (name == "csbdeu") return Method::csbdeu;
  if (name == "csbdeu-alt1") return Method::csbdeu_alt_situation;
  if (name == "csbdeu-alt2") return Method::csbdeu_alt_edge;
  throw ValidationError("unknown method '" + name +
                        "' (expected bdepu, csbdeu, csbdeu-alt1 or csbdeu-alt2)");
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::bdepu: return "bdepu";
    case Method::csbdeu: return "csbdeu";
    case Method::csbdeu_alt_situation: return "csbdeu-alt1";
    case Method::csbdeu_alt_edge: return "csbdeu-alt2";
  }
  throw ValidationError("unknown method value");
}

double HyperParams::stage_total(int j) const {
  double total = 0;
  for (double a : stage_edge[static_cast<size_t>(j)]) total += a;
  return total;
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0)) {
    throw ValidationError("alpha must be positive, got " + std::to_string(alpha));
  }
}

// ValidationError if any stage's members sit on more than one level; the
// level-indexed rules are undefined across levels.
void require_level_confined(const StagedTree& st, const char* method_name) {
  for (size_t j = 0; j < st.stages.size(); ++j) {
    int level = -1;
    for (int v : st.stages[j]) {
      int lv = st.tree.level_of(v);
      if (level == -1) level = lv;
      if (lv != level) {
        throw ValidationError(std::string(method_name) + ": stage " + std::to_string(j) +
                              " spans levels " + std::to_string(level) + " and " +
                              std::to_string(lv) + "; level-indexed rules need per-level stages");
      }
    }
  }
}

}  // namespace

HyperParams bdepu_hyper(const StagedTree& st, double alpha) {
  check_alpha(alpha);
  const auto below = st.tree.leaves_below();
  const double per_path = alpha / static_cast<double>(st.tree.leaf_count());

  HyperParams h;
  h.alpha = alpha;
  h.stage_edge.resize(st.stages.size());
  for (size_t j = 0; j < st.stages.size(); ++j) {
    const auto& members = st.stages[j];
    std::vector<double> edge(static_cast<size_t>(st.tree.at(members.front()).out_degree()), 0.0);
    for (int v : members) {
      const auto& children = st.tree.at(v).children;
      for (size_t k = 0; k < children.size(); ++k) {
        edge[k] += per_path * static_cast<double>(below[static_cast<size_t>(children[k])]);
      }
    }
    h.stage_edge[j] = std::move(edge);
  }
  return h;
}

HyperParams csbdeu_hyper(const StagedTree& st, double alpha) {
  check_alpha(alpha);
  require_level_confined(st, "csbdeu");

  // Forward flow: the root holds alpha and every situation divides its
  // incoming mass equally over its outgoing edges; a child inherits its
  // entering edge's mass.  A stage's k-th hyperparameter sums its members'
  // k-th edges, which equals (sum of incoming member masses) / out-degree.
  std::vector<double> mass(st.tree.nodes.size(), 0.0);
  mass[static_cast<size_t>(st.tree.root)] = alpha;
  for (int v : st.tree.breadth_first_order()) {
    const auto& node = st.tree.at(v);
    if (node.is_leaf()) continue;
    double share = mass[static_cast<size_t>(v)] / static_cast<double>(node.out_degree());
    for (int c : node.children) mass[static_cast<size_t>(c)] = share;
  }

  HyperParams h;
  h.alpha = alpha;
  h.stage_edge.resize(st.stages.size());
  for (size_t j = 0; j < st.stages.size(); ++j) {
    const auto& members = st.stages[j];
    std::vector<double> edge(static_cast<size_t>(st.tree.at(members.front()).out_degree()), 0.0);
    for (int v : members) {
      double share = mass[static_cast<size_t>(v)] / static_cast<double>(st.tree.at(v).out_degree());
      for (size_t k = 0; k < edge.size(); ++k) edge[k] += share;
    }
    h.stage_edge[j] = std::move(edge);
  }
  return h;
}

HyperParams csbdeu_alt_hyper(const StagedTree& st, double alpha, AltRule rule) {
  check_alpha(alpha);
  require_level_confined(st, rule == AltRule::per_situation ? "csbdeu-alt1" : "csbdeu-alt2");

  // Per level: number of situations and number of edges leaving it.
  std::map<int, double> situations_at;
  std::map<int, double> edges_from;
  for (int v : st.tree.situations()) {
    int level = st.tree.level_of(v);
    situations_at[level] += 1;
    edges_from[level] += st.tree.at(v).out_degree();
  }

  HyperParams h;
  h.alpha = alpha;
  h.stage_edge.resize(st.stages.size());
  for (size_t j = 0; j < st.stages.size(); ++j) {
    const auto& members = st.stages[j];
    std::vector<double> edge(static_cast<size_t>(st.tree.at(members.front()).out_degree()), 0.0);
    for (int v : members) {
      int level = st.tree.level_of(v);
      double share = rule == AltRule::per_situation
                         ? alpha / (situations_at[level] * st.tree.at(v).out_degree())
                         : alpha / edges_from[level];
      for (size_t k = 0; k < edge.size(); ++k) edge[k] += share;
    }
    h.stage_edge[j] = std::move(edge);
  }
  return h;
}

HyperParams make_hyper(const StagedTree& st, double alpha, Method m) {
  switch (m) {
    case Method::bdepu: return bdepu_hyper(st, alpha);
    case Method::csbdeu: return csbdeu_hyper(st, alpha);
    case Method::csbdeu_alt_situation: return csbdeu_alt_hyper(st, alpha, AltRule::per_situation);
    case Method::csbdeu_alt_edge: return csbdeu_alt_hyper(st, alpha, AltRule::per_edge);
  }
  throw ValidationError("unknown method value");
}

void check_hyper_shape(const StagedTree& st, const HyperParams& h) {
  if (h.stage_edge.size() != st.stages.size()) {
    throw ValidationError("hyperparameters: stage count mismatch");
  }
  for (size_t j = 0; j < st.stages.size(); ++j) {
    if (h.stage_edge[j].size() !=
        static_cast<size_t>(st.tree.at(st.stages[j].front()).out_degree())) {
      throw ValidationError("hyperparameters: edge count mismatch at stage " + std::to_string(j));
    }
  }
}

}  // namespace stagetree
