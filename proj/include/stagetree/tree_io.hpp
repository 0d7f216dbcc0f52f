// Document IO.  Trees travel as JSON documents with a fixed field order:
//   schema, root, nodes (id/leaf), edges (id/from/to/label, depth-first),
//   stages (lists of situation ids), then optional counts (edge id ->
//   integer), alpha, method, theta.  Datasets travel as CSV with a header
//   row; a trailing "count" column (case-insensitive) holds aggregated
//   multiplicities and is expanded on load.
#pragma once

#include <optional>
#include <string>

#include "stagetree/dataset.hpp"
#include "stagetree/hyper.hpp"
#include "stagetree/staged_tree.hpp"

namespace stagetree {

struct TreeDocument {
  StagedTree st;
  std::optional<EdgeCounts> counts;
  std::optional<double> alpha;
  std::optional<Method> method;
};

inline constexpr int kSchemaVersion = 1;

// Parse and validate a document.  ParseError for malformed JSON or missing
// or ill-typed fields; ValidationError for semantic violations (bad tree
// shape, bad staging, counts that do not match any routing).
TreeDocument load_tree_text(const std::string& json_text);
TreeDocument load_tree(const std::string& path);

// Canonical serialization: fixed field order, depth-first edge order with
// canonical edge ids "e0", "e1", ..., node list in breadth-first order,
// 2-space indentation.  Node ids are written exactly as stored (relabeling
// is a separate, explicit step: canonicalize()).
std::string save_tree_text(const TreeDocument& doc);
void save_tree(const TreeDocument& doc, const std::string& path);

// CSV loading with header and count-column expansion.
Dataset load_dataset_text(const std::string& csv_text);
Dataset load_dataset(const std::string& path);

}  // namespace stagetree
