// Writes the fixture documents used by the test suites: the four-variable
// survival tree with its hand staging, the two trees derived from it by the
// operators, and the small three-path pair.  Counts travel to derived trees
// through the leaf correspondence.  Run from the repository root (or pass an
// output directory); the results are committed, and the tests cross-check
// them against in-code constructions.
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stagetree/dataset.hpp"
#include "stagetree/transform.hpp"
#include "stagetree/tree_io.hpp"

namespace {

using namespace stagetree;

Dataset titanic_dataset() {
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

StagedTree titanic_s1() {
  std::vector<std::vector<std::string>> paths;
  const Dataset data = titanic_dataset();
  for (const auto& record : data.records) {
    if (paths.empty() || paths.back() != record) paths.push_back(record);
  }
  EventTree tree = build_tree_from_paths(paths);

  auto group = [&](std::initializer_list<const char*> ids) {
    std::vector<int> members;
    for (const char* id : ids) members.push_back(tree.index_of(id));
    return members;
  };
  std::vector<std::vector<int>> stages = {
      group({"s0"}),        group({"s1"}),  group({"s2"}),         group({"s3", "s4"}),
      group({"s5", "s6"}),  group({"s7"}),  group({"s8"}),         group({"s9"}),
      group({"s10", "s12"}), group({"s11"}),
  };
  return make_staged_tree(tree, stages);
}

TreeDocument with_counts(StagedTree st, const EdgeCounts& source_counts,
                         const EventTree& source_tree) {
  TreeDocument doc;
  doc.counts = counts_from_leaf_counts(st.tree, leaf_counts(source_tree, source_counts));
  doc.st = std::move(st);
  doc.alpha = 12.0;
  doc.method = Method::bdepu;
  return doc;
}

int stage_of_id(const StagedTree& st, const std::string& id) {
  return st.stage_of_node(st.tree.index_of(id));
}

void write_three_path_pair(const std::filesystem::path& dir) {
  EventTree nested_tree = build_tree_from_paths({{"a", "x"}, {"a", "y"}, {"b", "z"}});
  StagedTree nested = make_staged_tree(
      nested_tree, {{nested_tree.index_of("s0")}, {nested_tree.index_of("s1")},
                    {nested_tree.index_of("s2")}});

  Dataset data;
  data.columns = {"v1", "v2"};
  data.records = {{"a", "x"}, {"a", "y"}, {"b", "z"}};

  TreeDocument nested_doc;
  nested_doc.st = nested;
  nested_doc.counts = route_dataset(nested_tree, data);
  save_tree(nested_doc, (dir / "three_paths_nested.json").string());

  // The floret form arises from the nested form by contracting both root
  // edges; building it that way keeps the pair exactly one operator apart.
  ResizeSpec spec;
  spec.stage = stage_of_id(nested, "s0");
  spec.edges = {0, 1};
  TransformResult contracted = resize_contract(nested, spec);
  TreeDocument floret_doc;
  floret_doc.counts =
      counts_from_leaf_counts(contracted.tree.tree, leaf_counts(nested_tree, *nested_doc.counts));
  floret_doc.st = std::move(contracted.tree);
  save_tree(floret_doc, (dir / "three_paths_floret.json").string());
}

}  // namespace

int main(int argc, char** argv) {
  try {
    std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(dir);

    StagedTree s1 = titanic_s1();
    const Dataset data = titanic_dataset();
    EdgeCounts counts = route_dataset(s1.tree, data);
    TreeDocument s1_doc;
    s1_doc.st = s1;
    s1_doc.counts = counts;
    s1_doc.alpha = 12.0;
    s1_doc.method = Method::bdepu;
    save_tree(s1_doc, (dir / "titanic_s1.json").string());

    auto first = swap(s1, *twin_at(s1, s1.tree.index_of("s1")));
    auto second = swap(first.tree, *twin_at(first.tree, first.tree.tree.index_of("s2")));
    TreeDocument s2_doc = with_counts(second.tree, counts, s1.tree);
    save_tree(s2_doc, (dir / "titanic_s2.json").string());

    ResizeSpec resize;
    resize.stage = stage_of_id(s2_doc.st, "s1");
    resize.edges = {0};
    auto third = resize_contract(s2_doc.st, resize);
    TreeDocument s3_doc = with_counts(third.tree, counts, s1.tree);
    save_tree(s3_doc, (dir / "titanic_s3.json").string());

    write_three_path_pair(dir);
    std::cout << "fixtures written to " << dir.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
