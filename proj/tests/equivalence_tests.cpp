// Swap and resize operators, staged-tree isomorphism, canonical
// relabeling, and the bounded equivalence search.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "stagetree/canonical.hpp"
#include "stagetree/errors.hpp"
#include "stagetree/hyper.hpp"
#include "stagetree/score.hpp"
#include "stagetree/search.hpp"
#include "stagetree/transform.hpp"
#include "stagetree/tree_io.hpp"
#include "test_support.hpp"

using namespace stagetree;
using namespace testsupport;

namespace {

std::set<std::string> twin_ids(const StagedTree& st) {
  std::set<std::string> ids;
  for (const Twin& twin : find_twins(st)) ids.insert(st.tree.at(twin.root).id);
  return ids;
}

double bdepu_score(const StagedTree& st, const EdgeCounts& counts, double alpha) {
  return bd_log_score(st, counts, bdepu_hyper(st, alpha));
}

// A 2x2 product tree staged with both level-1 situations pooled: its root
// is a twin.
StagedTree pooled_square(std::optional<std::vector<std::vector<double>>> theta = std::nullopt) {
  EventTree tree = build_product_tree({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}});
  std::vector<std::vector<int>> stages = {{tree.index_of("s0")},
                                          {tree.index_of("s1"), tree.index_of("s2")}};
  return make_staged_tree(std::move(tree), std::move(stages), std::move(theta));
}

}  // namespace

TEST_CASE("twin listing on the survival study") {
  StagedTree st = titanic_s1();
  std::set<std::string> ids = twin_ids(st);
  // s1 and s2 root the two-level sex/age blocks; s3 and s4 root
  // single-edge blocks over the pooled-survival stages below them.
  CHECK(ids == std::set<std::string>{"s1", "s2", "s3", "s4"});
  // The root is no twin: its children live in two different stages.
  for (const Twin& twin : find_twins(st)) {
    CHECK(twin.root != st.tree.root);
    auto again = twin_at(st, twin.root);
    REQUIRE(again.has_value());
    CHECK(again->child_stage == twin.child_stage);
    // Every child really is a situation in that stage.
    for (int child : st.tree.at(twin.root).children) {
      CHECK_FALSE(st.tree.at(child).is_leaf());
      CHECK(st.stage_of_node(child) == twin.child_stage);
    }
  }
  // A one-floret tree has no twins at all.
  TreeDocument floret = load_tree(fixture("three_paths_floret.json"));
  CHECK(find_twins(floret.st).empty());
}

TEST_CASE("contraction listing on the survival study") {
  StagedTree s1 = titanic_s1();
  auto sites = find_contractions(s1);
  REQUIRE(sites.size() == 2);
  // The root's children each fill a whole stage, so both root edges are
  // contractible; on the passenger age stage only the Child edge leads to
  // a whole stage ({s10, s12}).
  CHECK(sites[0].stage == s1.stage_of_node(s1.tree.root));
  CHECK(sites[0].edges == std::vector<int>{0, 1});
  CHECK(sites[1].stage == s1.stage_of_node(s1.tree.index_of("s5")));
  CHECK(sites[1].edges == std::vector<int>{1});
  CHECK_FALSE(contraction_at(s1, s1.stage_of_node(s1.tree.index_of("s1"))).has_value());
}

TEST_CASE("swap on the crew block: structure and transposed counts") {
  StagedTree s1 = titanic_s1();
  Dataset data = titanic_dataset();
  EdgeCounts counts = route_dataset(s1.tree, data);

  int root = s1.tree.index_of("s1");
  auto twin = twin_at(s1, root);
  REQUIRE(twin.has_value());
  TransformResult res = swap(s1, *twin);
  const StagedTree& out = res.tree;

  // The twin root keeps its id but now branches on the lower level's
  // labels; the fresh middle layer carries the old root labels.
  int new_root = out.tree.index_of("s1");
  CHECK(out.tree.at(new_root).labels == std::vector<std::string>{"Adult"});
  REQUIRE(out.tree.at(new_root).out_degree() == 1);
  int middle = out.tree.at(new_root).children[0];
  CHECK(out.tree.at(middle).id == res.step.created_ids.at(0));
  CHECK(out.tree.at(middle).id.front() == 'm');
  CHECK(out.tree.at(middle).labels == std::vector<std::string>{"Male", "Female"});

  // Stage exchange: the root joined its children's old stage; the middle
  // layer joined the root's old stage.
  CHECK(out.stage_of_node(new_root) == s1.stage_of_node(s1.tree.index_of("s3")));
  CHECK(out.stage_of_node(middle) == s1.stage_of_node(root));
  // Stages not touched by the swap keep their members.
  CHECK(out.stage_of_node(out.tree.index_of("s10")) ==
        out.stage_of_node(out.tree.index_of("s12")));

  // Counts transpose: grid entry (k, t) moves to (t, k).
  EdgeCounts moved = reroute_counts(s1.tree, data, out.tree);
  CHECK(moved.at(new_root, 0) == 885);
  CHECK(moved.at(middle, 0) == 862);
  CHECK(moved.at(middle, 1) == 23);
  // The survival florets below are reattached intact.
  int s7 = out.tree.index_of("s7");
  CHECK(moved.at(s7, 0) == 192);
  CHECK(moved.at(s7, 1) == 670);

  // The recorded step replays to the same tree, byte for byte.
  TransformResult replay = apply_step(s1, res.step);
  CHECK(save_tree_text({replay.tree, std::nullopt, std::nullopt, std::nullopt}) ==
        save_tree_text({out, std::nullopt, std::nullopt, std::nullopt}));
}

TEST_CASE("swap moves theta rows with their stages") {
  std::vector<std::vector<double>> theta = {{0.3, 0.7}, {0.4, 0.6}};
  StagedTree st = pooled_square(theta);
  auto twin = twin_at(st, st.tree.root);
  REQUIRE(twin.has_value());
  TransformResult res = swap(st, *twin);
  REQUIRE(res.tree.theta.has_value());
  // Stage indices persist, so the rows are unchanged; row 0 (the old root
  // stage) now governs the middle layer, row 1 the root.
  CHECK((*res.tree.theta)[0] == std::vector<double>{0.3, 0.7});
  CHECK((*res.tree.theta)[1] == std::vector<double>{0.4, 0.6});
  CHECK(res.tree.stage_of_node(res.tree.tree.root) == 1);
}

TEST_CASE("swap requires a twin") {
  StagedTree s1 = titanic_s1();
  Twin bogus;
  bogus.root = s1.tree.root;  // children in two stages
  bogus.child_stage = 1;
  CHECK_THROWS_AS(swap(s1, bogus), ValidationError);
  Twin leafy;
  leafy.root = s1.tree.index_of("s7");  // children are leaves
  leafy.child_stage = 0;
  CHECK_THROWS_AS(swap(s1, leafy), ValidationError);
}

TEST_CASE("swap twice returns to the original up to relabeling") {
  std::mt19937 rng(31);
  int exercised = 0;
  while (exercised < 40) {
    EventTree tree = random_product_tree(rng);
    StagedTree st = random_level_staging(std::move(tree), rng);
    auto twins = find_twins(st);
    if (twins.empty()) continue;
    Dataset data = random_dataset(st.tree, rng, 200);
    EdgeCounts counts = route_dataset(st.tree, data);

    const Twin& twin = twins[static_cast<size_t>(
        std::uniform_int_distribution<int>(0, static_cast<int>(twins.size()) - 1)(rng))];
    std::string root_id = st.tree.at(twin.root).id;
    TransformResult once = swap(st, twin);

    // Count grid transposition at the swapped site.
    {
      const auto& grid = once.step.original_labels;
      int new_root = once.tree.tree.index_of(root_id);
      for (size_t t = 0; t < once.tree.tree.at(new_root).children.size(); ++t) {
        int middle = once.tree.tree.at(new_root).children[t];
        EdgeCounts moved = reroute_counts(st.tree, data, once.tree.tree);
        for (size_t k = 0; k < grid.size(); ++k) {
          int old_child = st.tree.at(twin.root).children[k];
          CHECK(moved.at(middle, static_cast<int>(k)) ==
                counts.at(old_child, static_cast<int>(t)));
        }
      }
    }

    auto twin_back = twin_at(once.tree, once.tree.tree.index_of(root_id));
    REQUIRE(twin_back.has_value());
    TransformResult twice = swap(once.tree, *twin_back);

    CHECK(staged_tree_isomorphic(st, twice.tree).has_value());
    // Leaves keep their ids through both swaps, so per-leaf counts match
    // the original exactly.
    EdgeCounts back = reroute_counts(st.tree, data, twice.tree.tree);
    CHECK(leaf_counts(twice.tree.tree, back) == leaf_counts(st.tree, counts));
    ++exercised;
  }
}

TEST_CASE("resize on the swapped study reproduces the recorded fixture") {
  TreeDocument s2 = load_tree(fixture("titanic_s2.json"));
  TreeDocument s3 = load_tree(fixture("titanic_s3.json"));

  int crew_sex = s2.st.tree.index_of("s1");
  auto spec = contraction_at(s2.st, s2.st.stage_of_node(crew_sex));
  REQUIRE(spec.has_value());
  CHECK(spec->edges == std::vector<int>{0});
  TransformResult res = resize_contract(s2.st, *spec);

  CHECK(staged_tree_isomorphic(res.tree, s3.st).has_value());
  int merged = res.tree.tree.index_of("s1");
  CHECK(res.tree.tree.at(merged).labels ==
        std::vector<std::string>{"Adult, Male", "Adult, Female"});
  // The swapped tree reorders record symbols, so counts travel by leaf
  // identity from the fixture's embedded counts rather than by routing.
  REQUIRE(s2.counts.has_value());
  EdgeCounts moved =
      counts_from_leaf_counts(res.tree.tree, leaf_counts(s2.st.tree, *s2.counts));
  CHECK(moved.at(merged, 0) == 862);
  CHECK(moved.at(merged, 1) == 23);

  // Iterating the contraction flattens the crew block into a four-edge
  // floret over joined three-part labels.
  auto deeper = contraction_at(res.tree, res.tree.stage_of_node(merged));
  REQUIRE(deeper.has_value());
  CHECK(deeper->edges == std::vector<int>{0, 1});
  TransformResult flat = resize_contract(res.tree, *deeper);
  int flat_crew = flat.tree.tree.index_of("s1");
  CHECK(flat.tree.tree.at(flat_crew).labels ==
        std::vector<std::string>{"Adult, Male, Yes", "Adult, Male, No", "Adult, Female, Yes",
                                 "Adult, Female, No"});
  EdgeCounts flat_counts =
      counts_from_leaf_counts(flat.tree.tree, leaf_counts(s2.st.tree, *s2.counts));
  CHECK(flat_counts.at(flat_crew, 0) == 192);
  CHECK(flat_counts.at(flat_crew, 1) == 670);
  CHECK(flat_counts.at(flat_crew, 2) == 20);
  CHECK(flat_counts.at(flat_crew, 3) == 3);
}

TEST_CASE("resize with a multi-member stage splices every member") {
  StagedTree s1 = titanic_s1();
  Dataset data = titanic_dataset();
  int passenger_age = s1.stage_of_node(s1.tree.index_of("s5"));
  auto spec = contraction_at(s1, passenger_age);
  REQUIRE(spec.has_value());
  CHECK(spec->edges == std::vector<int>{1});  // only the Child edge is saturated
  TransformResult res = resize_contract(s1, *spec);

  for (const char* id : {"s5", "s6"}) {
    int v = res.tree.tree.index_of(id);
    CHECK(res.tree.tree.at(v).labels ==
          std::vector<std::string>{"Adult", "Child, Yes", "Child, No"});
  }
  // The spliced-out stage ({s10, s12}) is gone.
  CHECK_THROWS_AS(res.tree.tree.index_of("s10"), ValidationError);
  CHECK(res.tree.stage_count() == s1.stage_count() - 1);

  EdgeCounts before = route_dataset(s1.tree, data);
  EdgeCounts after = reroute_counts(s1.tree, data, res.tree.tree);
  int s5 = res.tree.tree.index_of("s5");
  CHECK(after.at(s5, 1) == 29);
  CHECK(after.at(s5, 2) == 35);
  for (double alpha : {2.0, 12.0}) {
    CHECK(std::abs(bdepu_score(s1, before, alpha) - bdepu_score(res.tree, after, alpha)) < 1e-9);
  }
}

TEST_CASE("resize validates its spec") {
  StagedTree s1 = titanic_s1();
  ResizeSpec bad;
  bad.stage = s1.stage_of_node(s1.tree.index_of("s5"));
  bad.edges = {0};  // Adult children span two stages
  CHECK_THROWS_AS(resize_contract(s1, bad), ValidationError);
  bad.edges = {};
  CHECK_THROWS_AS(resize_contract(s1, bad), ValidationError);
  bad.edges = {5};
  CHECK_THROWS_AS(resize_contract(s1, bad), ValidationError);
  bad.stage = 99;
  bad.edges = {0};
  CHECK_THROWS_AS(resize_contract(s1, bad), ValidationError);
}

TEST_CASE("resize multiplies theta along spliced edges") {
  StagedTree nested = three_paths_nested();
  nested = make_staged_tree(nested.tree, nested.stages,
                            std::vector<std::vector<double>>{{0.5, 0.5}, {0.3, 0.7}, {1.0}});
  auto spec = contraction_at(nested, 0);
  REQUIRE(spec.has_value());
  CHECK(spec->edges == std::vector<int>{0, 1});
  TransformResult res = resize_contract(nested, *spec);
  REQUIRE(res.tree.theta.has_value());
  REQUIRE(res.tree.theta->size() == 1);
  const auto& row = (*res.tree.theta)[0];
  REQUIRE(row.size() == 3);
  CHECK(std::abs(row[0] - 0.15) < 1e-12);
  CHECK(std::abs(row[1] - 0.35) < 1e-12);
  CHECK(std::abs(row[2] - 0.50) < 1e-12);
}

TEST_CASE("isomorphism: positives, negatives, edge permutations") {
  TreeDocument nested = load_tree(fixture("three_paths_nested.json"));
  TreeDocument floret = load_tree(fixture("three_paths_floret.json"));

  // A tree is isomorphic to itself via the identity.
  auto self = staged_tree_isomorphic(nested.st, nested.st);
  REQUIRE(self.has_value());
  CHECK(self->is_identity_relabeling(nested.st, nested.st));

  // Different shapes are not isomorphic.
  CHECK_FALSE(staged_tree_isomorphic(nested.st, floret.st).has_value());

  // Same shape, same stage sizes, but the staging pattern differs: the
  // root's stage sizes disagree, so no bijection can map stages onto
  // stages.
  {
    EventTree tree = build_product_tree({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}});
    EventTree copy = tree;
    StagedTree a = make_staged_tree(
        std::move(tree), {{0}, {copy.index_of("s1"), copy.index_of("s2")}});
    StagedTree b = make_staged_tree(
        std::move(copy), {{0, 1}, {2}});  // root pooled with its first child
    CHECK_FALSE(staged_tree_isomorphic(a, b).has_value());
  }

  // Mirror image: matching requires permuting the root's edges.
  {
    StagedTree left = saturated_staging(build_tree_from_paths({{"a", "x"}, {"a", "y"}, {"b", "z"}}));
    StagedTree right = saturated_staging(build_tree_from_paths({{"b", "z"}, {"a", "x"}, {"a", "y"}}));
    auto iso = staged_tree_isomorphic(left, right);
    REQUIRE(iso.has_value());
    int root = left.tree.root;
    CHECK(iso->node_map[static_cast<size_t>(root)] == right.tree.root);
    CHECK(iso->edge_perm[static_cast<size_t>(root)] == std::vector<int>{1, 0});
  }

  // Survival study: the hand staging is not isomorphic to the saturated
  // staging of the same tree.
  StagedTree s1 = titanic_s1();
  StagedTree saturated = saturated_staging(titanic_tree());
  CHECK_FALSE(staged_tree_isomorphic(s1, saturated).has_value());
}

TEST_CASE("canonicalize produces byte-identical documents for scrambled copies") {
  StagedTree s1 = titanic_s1();

  // Scramble ids, stage order and member order.
  StagedTree scrambled = s1;
  for (int v = 0; v < scrambled.tree.node_count(); ++v) {
    scrambled.tree.at(v).id = "node_" + std::to_string(97 - v);
  }
  std::reverse(scrambled.stages.begin(), scrambled.stages.end());
  for (auto& stage : scrambled.stages) std::reverse(stage.begin(), stage.end());
  scrambled = make_staged_tree(scrambled.tree, scrambled.stages);

  std::string canon_a =
      save_tree_text({canonicalize(s1), std::nullopt, std::nullopt, std::nullopt});
  std::string canon_b =
      save_tree_text({canonicalize(scrambled), std::nullopt, std::nullopt, std::nullopt});
  CHECK(canon_a == canon_b);

  // Canonicalizing together with counts keeps them aligned: stage totals
  // and the score are unchanged.
  Dataset data = titanic_dataset();
  EdgeCounts counts = route_dataset(s1.tree, data);
  auto [canon_tree, canon_counts] = canonicalize(s1, counts);
  CHECK(canon_counts.total(canon_tree.tree) == 2201);
  CHECK(std::abs(bdepu_score(s1, counts, 12.0) - bdepu_score(canon_tree, canon_counts, 12.0)) <
        1e-12);
}

TEST_CASE("bounded search: known traces on the survival study") {
  StagedTree s1 = titanic_s1();
  TreeDocument s3 = load_tree(fixture("titanic_s3.json"));

  // Identity: zero operations suffice.
  auto self = bounded_equivalence_search(s1, s1, 0);
  REQUIRE(self.has_value());
  CHECK(self->empty());

  // Two operations are not enough...
  CHECK_FALSE(bounded_equivalence_search(s1, s3.st, 2).has_value());

  // ...three are: swap the two sex/age blocks, then contract the crew
  // block's single remaining edge.
  auto trace = bounded_equivalence_search(s1, s3.st, 3);
  REQUIRE(trace.has_value());
  REQUIRE(trace->size() == 3);
  CHECK((*trace)[0].kind == TransformStep::Kind::swap);
  CHECK((*trace)[0].twin_root_id == "s1");
  CHECK((*trace)[1].kind == TransformStep::Kind::swap);
  CHECK((*trace)[1].twin_root_id == "s2");
  CHECK((*trace)[2].kind == TransformStep::Kind::resize_contract);
  CHECK((*trace)[2].edges == std::vector<int>{0});

  // Replaying the found trace really lands on the target.
  StagedTree replayed = s1;
  for (const TransformStep& step : *trace) replayed = apply_step(replayed, step).tree;
  CHECK(staged_tree_isomorphic(replayed, s3.st).has_value());
}

TEST_CASE("bounded search: nested pair and a non-equivalent pair") {
  TreeDocument nested = load_tree(fixture("three_paths_nested.json"));
  TreeDocument floret = load_tree(fixture("three_paths_floret.json"));

  auto trace = bounded_equivalence_search(nested.st, floret.st, 1);
  REQUIRE(trace.has_value());
  REQUIRE(trace->size() == 1);
  CHECK((*trace)[0].kind == TransformStep::Kind::resize_contract);
  CHECK((*trace)[0].stage == 0);
  CHECK((*trace)[0].edges == std::vector<int>{0, 1});

  // The reverse direction has no contraction available and no twins; the
  // search exhausts its budget and reports nothing.
  CHECK_FALSE(bounded_equivalence_search(floret.st, nested.st, 4).has_value());

  // Unrelated trees: budget runs out, empty answer, no error.
  CHECK_FALSE(bounded_equivalence_search(nested.st, titanic_s1(), 2).has_value());
}

TEST_CASE("random operator chains preserve the path-uniform score") {
  std::mt19937 rng(777);
  int instances = 0;
  while (instances < 210) {
    EventTree tree = random_product_tree(rng);
    StagedTree st = random_level_staging(std::move(tree), rng);
    auto twins = find_twins(st);
    auto sites = find_contractions(st);
    if (twins.empty() && sites.empty()) continue;

    Dataset data = random_dataset(st.tree, rng, 300);
    EdgeCounts counts = route_dataset(st.tree, data);
    double alpha = random_alpha(rng);
    double before = bdepu_score(st, counts, alpha);
    std::int64_t leaves_before = st.tree.leaf_count();

    StagedTree current = st;
    std::vector<TransformStep> steps;
    int ops = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < ops; ++i) {
      auto cur_twins = find_twins(current);
      auto cur_sites = find_contractions(current);
      int choices = static_cast<int>(cur_twins.size() + cur_sites.size());
      if (choices == 0) break;
      int pick = std::uniform_int_distribution<int>(0, choices - 1)(rng);
      TransformResult res =
          pick < static_cast<int>(cur_twins.size())
              ? swap(current, cur_twins[static_cast<size_t>(pick)])
              : resize_contract(
                    current, cur_sites[static_cast<size_t>(pick - cur_twins.size())]);
      current = std::move(res.tree);
      steps.push_back(std::move(res.step));
    }
    if (steps.empty()) continue;

    // Counts carried over by leaf identity; structure totals survive.
    EdgeCounts moved = reroute_counts(st.tree, data, current.tree);
    CHECK(current.tree.leaf_count() == leaves_before);
    CHECK(moved.total(current.tree) == data.record_count());
    double after = bdepu_score(current, moved, alpha);
    CHECK(std::abs(before - after) < 1e-9);

    // The recorded steps replay to the identical tree.
    StagedTree replayed = st;
    for (const TransformStep& step : steps) replayed = apply_step(replayed, step).tree;
    CHECK(save_tree_text({replayed, std::nullopt, std::nullopt, std::nullopt}) ==
          save_tree_text({current, std::nullopt, std::nullopt, std::nullopt}));
    ++instances;
  }
}
