// Shared helpers for the test binaries: fixture paths, the survival-study
// tree and staging built in code (the fixture files are cross-checked
// against these), and seeded random generators for the property suites.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "stagetree/dataset.hpp"
#include "stagetree/staged_tree.hpp"

namespace testsupport {

using namespace stagetree;

inline std::string fixture(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

// The four-variable survival study: Role {Crew, Passenger}, Sex, Age,
// Survival, with no Child edge under Crew (a structural zero), 2201 records.
inline Dataset titanic_dataset() {
  Dataset data;
  data.columns = {"Role", "Sex", "Age", "Survival"};
  struct Row {
    const char* cells[4];
    int copies;
  };
  const std::vector<Row> rows = {
      {{"Crew", "Male", "Adult", "Yes"}, 192},      {{"Crew", "Male", "Adult", "No"}, 670},
      {{"Crew", "Female", "Adult", "Yes"}, 20},     {{"Crew", "Female", "Adult", "No"}, 3},
      {{"Passenger", "Male", "Adult", "Yes"}, 146}, {{"Passenger", "Male", "Adult", "No"}, 659},
      {{"Passenger", "Male", "Child", "Yes"}, 29},  {{"Passenger", "Male", "Child", "No"}, 35},
      {{"Passenger", "Female", "Adult", "Yes"}, 296},
      {{"Passenger", "Female", "Adult", "No"}, 106},
      {{"Passenger", "Female", "Child", "Yes"}, 28},
      {{"Passenger", "Female", "Child", "No"}, 17},
  };
  for (const auto& row : rows) {
    std::vector<std::string> record(row.cells, row.cells + 4);
    for (int c = 0; c < row.copies; ++c) data.records.push_back(record);
  }
  return data;
}

inline EventTree titanic_tree() {
  std::vector<std::vector<std::string>> paths;
  for (const auto& record : titanic_dataset().records) {
    if (paths.empty() || paths.back() != record) paths.push_back(record);
  }
  return build_tree_from_paths(paths);
}

// The hand staging: sexes pooled per role, ages pooled per sex within the
// passengers, and the two child survival florets pooled.
inline StagedTree titanic_s1() {
  EventTree tree = titanic_tree();
  auto group = [&](std::initializer_list<const char*> ids) {
    std::vector<int> members;
    for (const char* id : ids) members.push_back(tree.index_of(id));
    return members;
  };
  std::vector<std::vector<int>> stages = {
      group({"s0"}),         group({"s1"}),  group({"s2"}),  group({"s3", "s4"}),
      group({"s5", "s6"}),   group({"s7"}),  group({"s8"}),  group({"s9"}),
      group({"s10", "s12"}), group({"s11"}),
  };
  return make_staged_tree(std::move(tree), std::move(stages));
}

// The small pair: three paths through two levels, and its one-floret
// contraction.  One record lies along each path.
inline StagedTree three_paths_nested() {
  EventTree tree = build_tree_from_paths({{"a", "x"}, {"a", "y"}, {"b", "z"}});
  std::vector<std::vector<int>> stages = {
      {tree.index_of("s0")}, {tree.index_of("s1")}, {tree.index_of("s2")}};
  return make_staged_tree(std::move(tree), std::move(stages));
}

inline Dataset three_paths_dataset() {
  Dataset data;
  data.columns = {"v1", "v2"};
  data.records = {{"a", "x"}, {"a", "y"}, {"b", "z"}};
  return data;
}

// A product tree over 2-4 variables with 2-3 states each; stratified by
// construction.
inline EventTree random_product_tree(std::mt19937& rng) {
  std::uniform_int_distribution<int> var_count(2, 4);
  std::uniform_int_distribution<int> state_count(2, 3);
  std::vector<Variable> vars;
  int k = var_count(rng);
  for (int i = 0; i < k; ++i) {
    Variable var;
    var.name = "v" + std::to_string(i);
    int states = state_count(rng);
    for (int s = 0; s < states; ++s) var.states.push_back("x" + std::to_string(s));
    vars.push_back(std::move(var));
  }
  return build_product_tree(vars);
}

// A level-confined random staging: each level's situations are split into
// random groups (occasionally one single group, which creates twins).
// Level confinement keeps every stage on one level, so the staging is
// square-free and valid for every hyperparameter rule.
inline StagedTree random_level_staging(EventTree tree, std::mt19937& rng) {
  std::map<int, std::vector<int>> by_level;
  for (int v : tree.breadth_first_order()) {
    if (!tree.at(v).is_leaf()) by_level[tree.level_of(v)].push_back(v);
  }
  std::vector<std::vector<int>> stages;
  for (auto& [level, members] : by_level) {
    int n = static_cast<int>(members.size());
    std::uniform_int_distribution<int> coin(0, 2);
    int groups = coin(rng) == 0 ? 1 : std::uniform_int_distribution<int>(1, n)(rng);
    std::vector<std::vector<int>> buckets(static_cast<size_t>(groups));
    std::uniform_int_distribution<int> pick(0, groups - 1);
    for (int v : members) buckets[static_cast<size_t>(pick(rng))].push_back(v);
    for (auto& bucket : buckets) {
      if (!bucket.empty()) stages.push_back(std::move(bucket));
    }
  }
  return make_staged_tree(std::move(tree), std::move(stages));
}

// Uniform random root-to-leaf walks; the record is the concatenation of the
// label parts along the path.
inline Dataset random_dataset(const EventTree& tree, std::mt19937& rng, int max_records) {
  Dataset data;
  std::uniform_int_distribution<int> record_count(1, max_records);
  int n = record_count(rng);
  for (int r = 0; r < n; ++r) {
    std::vector<std::string> record;
    int v = tree.root;
    while (!tree.at(v).is_leaf()) {
      const auto& node = tree.at(v);
      int k = std::uniform_int_distribution<int>(0, node.out_degree() - 1)(rng);
      for (const auto& part : label_parts(node.labels[static_cast<size_t>(k)])) {
        record.push_back(part);
      }
      v = node.children[static_cast<size_t>(k)];
    }
    data.records.push_back(std::move(record));
  }
  for (size_t c = 0; c < data.records.front().size(); ++c) {
    data.columns.push_back("v" + std::to_string(c));
  }
  return data;
}

inline double random_alpha(std::mt19937& rng) {
  return std::uniform_real_distribution<double>(0.5, 20.0)(rng);
}

}  // namespace testsupport
