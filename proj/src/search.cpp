#include "stagetree/search.hpp"

#include <deque>
#include <unordered_set>
#include <utility>

#include "stagetree/canonical.hpp"
#include "stagetree/tree_io.hpp"

namespace stagetree {

namespace {

// Dedup key: the canonical serialization of the relabeled tree, so states
// reached along commuting move orders collapse to one frontier entry.
std::string state_key(const StagedTree& st) {
  TreeDocument doc;
  doc.st = canonicalize(st);
  return save_tree_text(doc);
}

}  // namespace

std::optional<std::vector<TransformStep>> bounded_equivalence_search(const StagedTree& a,
                                                                     const StagedTree& b,
                                                                     int max_ops) {
  struct State {
    StagedTree tree;
    std::vector<TransformStep> trace;
  };

  std::deque<State> queue;
  std::unordered_set<std::string> seen;
  queue.push_back(State{a, {}});
  seen.insert(state_key(a));

  while (!queue.empty()) {
    State state = std::move(queue.front());
    queue.pop_front();

    if (staged_tree_isomorphic(state.tree, b).has_value()) return state.trace;
    if (static_cast<int>(state.trace.size()) == max_ops) continue;

    std::vector<TransformResult> moves;
    for (const Twin& twin : find_twins(state.tree)) moves.push_back(swap(state.tree, twin));
    for (const ResizeSpec& spec : find_contractions(state.tree)) {
      moves.push_back(resize_contract(state.tree, spec));
    }
    for (auto& move : moves) {
      if (!seen.insert(state_key(move.tree)).second) continue;
      std::vector<TransformStep> trace = state.trace;
      trace.push_back(std::move(move.step));
      queue.push_back(State{std::move(move.tree), std::move(trace)});
    }
  }
  return std::nullopt;
}

}  // namespace stagetree
