// Command-line front end: score staged trees, print hyperparameters, learn
// stagings, apply the swap/resize operators, and search for operator
// sequences connecting two trees.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stagetree/canonical.hpp"
#include "stagetree/errors.hpp"
#include "stagetree/learn.hpp"
#include "stagetree/score.hpp"
#include "stagetree/search.hpp"
#include "stagetree/transform.hpp"
#include "stagetree/tree_io.hpp"

namespace {

using namespace stagetree;

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

// "--alpha leaves" resolves to the tree's leaf count at run time.
double resolve_alpha(const std::string& text, const EventTree& tree) {
  if (text == "leaves") return static_cast<double>(tree.leaf_count());
  try {
    size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ValidationError("alpha: expected a positive number or 'leaves', got '" + text + "'");
  }
}

EdgeCounts counts_for_scoring(const TreeDocument& doc, const std::string& data_path) {
  if (!data_path.empty()) return route_dataset(doc.st.tree, load_dataset(data_path));
  if (doc.counts.has_value()) return *doc.counts;
  throw ValidationError("score: no --data given and the tree document embeds no counts");
}

// Counts travel to a transformed tree through the leaf correspondence: every
// leaf keeps its id, so per-leaf totals carry over and inner edges are the
// sums of the leaves below them.
std::optional<EdgeCounts> transport_counts(const TreeDocument& doc, const EventTree& target) {
  if (!doc.counts.has_value()) return std::nullopt;
  return counts_from_leaf_counts(target, leaf_counts(doc.st.tree, *doc.counts));
}

std::string describe_step(const TransformStep& step) {
  if (step.kind == TransformStep::Kind::swap) {
    return "swap " + step.twin_root_id;
  }
  std::string edges;
  for (size_t i = 0; i < step.edges.size(); ++i) {
    edges += (i ? "," : "") + std::to_string(step.edges[i]);
  }
  return "resize " + std::to_string(step.stage) + " edges " + edges;
}

int run(int argc, char** argv) {
  CLI::App app{"staged-tree scoring, transformation and learning"};
  app.require_subcommand(1);

  std::string tree_path;
  std::string tree_path_b;
  std::string data_path;
  std::string out_path;
  std::string alpha_text = "leaves";
  std::string method_text = "bdepu";
  bool oracle = false;
  bool same_level_only = false;
  bool square_free = false;
  std::string twin_root;
  int stage = -1;
  std::vector<int> edges;
  int max_ops = 0;

  auto* score_cmd = app.add_subcommand("score", "Print the log marginal likelihood of a tree");
  score_cmd->add_option("--tree", tree_path, "staged tree document")->required();
  score_cmd->add_option("--data", data_path, "dataset CSV (default: counts embedded in the tree)");
  score_cmd->add_option("--alpha", alpha_text, "total prior mass, a number or 'leaves'");
  score_cmd->add_option("--method", method_text, "bdepu|csbdeu|csbdeu-alt1|csbdeu-alt2");
  score_cmd->add_flag("--oracle", oracle, "also run the sequential predictive walk (needs --data)");

  auto* hyper_cmd = app.add_subcommand("hyper", "Print per-stage hyperparameter vectors");
  hyper_cmd->add_option("--tree", tree_path)->required();
  hyper_cmd->add_option("--alpha", alpha_text);
  hyper_cmd->add_option("--method", method_text);

  auto* learn_cmd = app.add_subcommand("learn", "Learn a staging by greedy stage merging");
  learn_cmd->add_option("--tree", tree_path, "event tree document (staging ignored)")->required();
  learn_cmd->add_option("--data", data_path, "dataset CSV")->required();
  learn_cmd->add_option("--alpha", alpha_text);
  learn_cmd->add_option("--method", method_text);
  learn_cmd->add_flag("--same-level-only", same_level_only, "merge only within one level");
  learn_cmd->add_flag("--square-free", square_free, "never stage a situation with its ancestor");
  learn_cmd->add_option("--out", out_path, "output tree document")->required();

  auto* transform_cmd = app.add_subcommand("transform", "Apply one operator");
  transform_cmd->require_subcommand(1);
  auto* swap_cmd = transform_cmd->add_subcommand("swap", "Transpose the two levels of a twin");
  swap_cmd->add_option("--tree", tree_path)->required();
  swap_cmd->add_option("--twin-root", twin_root, "node id rooting the twin")->required();
  swap_cmd->add_option("--out", out_path)->required();
  auto* resize_cmd = transform_cmd->add_subcommand("resize", "Contract saturated child florets");
  resize_cmd->add_option("--tree", tree_path)->required();
  resize_cmd->add_option("--stage", stage, "stage index to contract at")->required();
  resize_cmd->add_option("--edges", edges, "edge positions (default: all eligible)")
      ->delimiter(',');
  resize_cmd->add_option("--out", out_path)->required();

  auto* check_cmd = app.add_subcommand("check", "Inspect operator sites and equivalence");
  check_cmd->require_subcommand(1);
  auto* twins_cmd = check_cmd->add_subcommand("twins", "List swap sites");
  twins_cmd->add_option("--tree", tree_path)->required();
  auto* contractions_cmd = check_cmd->add_subcommand("contractions", "List resize sites");
  contractions_cmd->add_option("--tree", tree_path)->required();
  auto* equiv_cmd = check_cmd->add_subcommand("equiv", "Search for an operator sequence");
  equiv_cmd->add_option("--tree-a", tree_path)->required();
  equiv_cmd->add_option("--tree-b", tree_path_b)->required();
  equiv_cmd->add_option("--max-ops", max_ops, "operator budget")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message or the requested help text
    return code == 0 ? 0 : 2;
  }

  if (*score_cmd) {
    if (oracle && data_path.empty()) {
      throw ValidationError("score: --oracle needs --data (it walks records in sequence)");
    }
    TreeDocument doc = load_tree(tree_path);
    double alpha = resolve_alpha(alpha_text, doc.st.tree);
    Method method = method_from_string(method_text);
    HyperParams h = make_hyper(doc.st, alpha, method);
    EdgeCounts counts = counts_for_scoring(doc, data_path);
    std::cout << "log_score=" << fmt(bd_log_score(doc.st, counts, h)) << "\n";
    if (oracle) {
      std::cout << "oracle_log_score="
                << fmt(sequential_oracle_log_score(doc.st, load_dataset(data_path), h)) << "\n";
    }
    return 0;
  }

  if (*hyper_cmd) {
    TreeDocument doc = load_tree(tree_path);
    double alpha = resolve_alpha(alpha_text, doc.st.tree);
    HyperParams h = make_hyper(doc.st, alpha, method_from_string(method_text));
    for (int j = 0; j < doc.st.stage_count(); ++j) {
      std::cout << "stage " << j << " (";
      const auto& members = doc.st.stages[static_cast<size_t>(j)];
      for (size_t i = 0; i < members.size(); ++i) {
        std::cout << (i ? " " : "") << doc.st.tree.at(members[i]).id;
      }
      std::cout << "):";
      for (double a : h.stage_edge[static_cast<size_t>(j)]) std::cout << " " << fmt(a);
      std::cout << "\n";
    }
    return 0;
  }

  if (*learn_cmd) {
    TreeDocument doc = load_tree(tree_path);
    Dataset data = load_dataset(data_path);
    LearnConfig cfg;
    cfg.alpha = resolve_alpha(alpha_text, doc.st.tree);
    cfg.method = method_from_string(method_text);
    cfg.same_level_only = same_level_only;
    cfg.enforce_square_free = square_free;
    LearnResult result = ahc_learn(doc.st.tree, data, cfg);
    std::cout << "initial log_score=" << fmt(result.initial_score) << "\n";
    for (const auto& it : result.iterations) {
      std::cout << "merge " << it.stage_a << " " << it.stage_b
                << " log_score=" << fmt(it.score_after) << "\n";
    }
    std::cout << "final log_score=" << fmt(result.log_score) << "\n";
    TreeDocument out;
    out.st = result.tree;
    out.counts = route_dataset(doc.st.tree, data);
    out.alpha = cfg.alpha;
    out.method = cfg.method;
    save_tree(out, out_path);
    return 0;
  }

  if (*swap_cmd || *resize_cmd) {
    TreeDocument doc = load_tree(tree_path);
    TransformResult result = [&] {
      if (*swap_cmd) {
        auto twin = twin_at(doc.st, doc.st.tree.index_of(twin_root));
        if (!twin.has_value()) {
          throw ValidationError("swap: node '" + twin_root + "' roots no twin");
        }
        return swap(doc.st, *twin);
      }
      ResizeSpec spec;
      if (edges.empty()) {
        auto maximal = contraction_at(doc.st, stage);
        if (!maximal.has_value()) {
          throw ValidationError("resize: stage " + std::to_string(stage) +
                                " has no eligible edge positions");
        }
        spec = *maximal;
      } else {
        spec.stage = stage;
        spec.edges = edges;
      }
      return resize_contract(doc.st, spec);
    }();
    std::cout << describe_step(result.step) << "\n";
    TreeDocument out;
    out.st = std::move(result.tree);
    out.counts = transport_counts(doc, out.st.tree);
    out.alpha = doc.alpha;
    out.method = doc.method;
    save_tree(out, out_path);
    return 0;
  }

  if (*twins_cmd) {
    TreeDocument doc = load_tree(tree_path);
    for (const Twin& twin : find_twins(doc.st)) {
      std::cout << "twin " << doc.st.tree.at(twin.root).id << " stage " << twin.child_stage
                << "\n";
    }
    return 0;
  }

  if (*contractions_cmd) {
    TreeDocument doc = load_tree(tree_path);
    for (const ResizeSpec& spec : find_contractions(doc.st)) {
      std::cout << "contraction stage " << spec.stage << " edges ";
      for (size_t i = 0; i < spec.edges.size(); ++i) {
        std::cout << (i ? "," : "") << spec.edges[i];
      }
      std::cout << "\n";
    }
    return 0;
  }

  if (*equiv_cmd) {
    TreeDocument doc_a = load_tree(tree_path);
    TreeDocument doc_b = load_tree(tree_path_b);
    if (max_ops < 0) throw ValidationError("equiv: --max-ops must be nonnegative");
    auto trace = bounded_equivalence_search(doc_a.st, doc_b.st, max_ops);
    if (!trace.has_value()) {
      std::cout << "not-found-within-budget\n";
      return 0;
    }
    for (const auto& step : *trace) std::cout << describe_step(step) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stagetree::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const stagetree::RoutingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const stagetree::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
