#include "stagetree/tree_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "stagetree/errors.hpp"

namespace stagetree {

namespace {

using ordered_json = nlohmann::ordered_json;

// Depth-first edge enumeration; the canonical edge ids are "e0", "e1", ...
// in this order.
std::vector<std::pair<int, int>> edge_order(const EventTree& tree) {
  std::vector<std::pair<int, int>> edges;
  for (int v : tree.depth_first_order()) {
    const auto& node = tree.at(v);
    for (size_t k = 0; k < node.children.size(); ++k) {
      edges.emplace_back(v, static_cast<int>(k));
    }
  }
  return edges;
}

const ordered_json& field(const ordered_json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(std::string("document: missing field '") + name + "'");
  }
  return *it;
}

std::string string_field(const ordered_json& obj, const char* name) {
  const auto& value = field(obj, name);
  if (!value.is_string()) {
    throw ParseError(std::string("document: field '") + name + "' must be a string");
  }
  return value.get<std::string>();
}

}  // namespace

TreeDocument load_tree_text(const std::string& json_text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: top level must be an object");

  const auto& schema = field(doc, "schema");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion) {
    throw ParseError("document: field 'schema' must be the integer " +
                     std::to_string(kSchemaVersion));
  }

  // Nodes, in document order; ids must be unique.
  const auto& nodes = field(doc, "nodes");
  if (!nodes.is_array() || nodes.empty()) {
    throw ParseError("document: field 'nodes' must be a non-empty array");
  }
  EventTree tree;
  std::unordered_map<std::string, int> index;
  std::vector<char> leaf_flag;
  for (const auto& entry : nodes) {
    if (!entry.is_object()) throw ParseError("document: field 'nodes' must hold objects");
    std::string id = string_field(entry, "id");
    const auto& leaf = field(entry, "leaf");
    if (!leaf.is_boolean()) throw ParseError("document: field 'leaf' must be a boolean");
    if (!index.emplace(id, static_cast<int>(tree.nodes.size())).second) {
      throw ValidationError("document: duplicate node id '" + id + "'");
    }
    EventTree::Node node;
    node.id = id;
    tree.nodes.push_back(std::move(node));
    leaf_flag.push_back(leaf.get<bool>() ? 1 : 0);
  }

  std::string root_id = string_field(doc, "root");
  auto root_it = index.find(root_id);
  if (root_it == index.end()) {
    throw ValidationError("document: root '" + root_id + "' is not a listed node");
  }
  tree.root = root_it->second;

  // Edges carry the structure; a parent's edges appear in child order.
  const auto& edges = field(doc, "edges");
  if (!edges.is_array()) throw ParseError("document: field 'edges' must be an array");
  std::vector<std::string> edge_ids;
  std::unordered_set<std::string> edge_id_set;
  for (const auto& entry : edges) {
    if (!entry.is_object()) throw ParseError("document: field 'edges' must hold objects");
    std::string id = string_field(entry, "id");
    std::string from = string_field(entry, "from");
    std::string to = string_field(entry, "to");
    std::string label = string_field(entry, "label");
    if (!edge_id_set.insert(id).second) {
      throw ValidationError("document: duplicate edge id '" + id + "'");
    }
    auto from_it = index.find(from);
    auto to_it = index.find(to);
    if (from_it == index.end() || to_it == index.end()) {
      throw ValidationError("document: edge '" + id + "' references an unknown node");
    }
    auto& parent = tree.nodes[static_cast<size_t>(from_it->second)];
    auto& child = tree.nodes[static_cast<size_t>(to_it->second)];
    if (child.parent != -1) {
      throw ValidationError("document: node '" + to + "' has two incoming edges");
    }
    child.parent = from_it->second;
    child.edge_in_parent = static_cast<int>(parent.children.size());
    parent.children.push_back(to_it->second);
    parent.labels.push_back(label);
    edge_ids.push_back(id);
  }

  for (size_t v = 0; v < tree.nodes.size(); ++v) {
    bool is_leaf = tree.nodes[v].children.empty();
    if (is_leaf != (leaf_flag[v] != 0)) {
      throw ValidationError("document: node '" + tree.nodes[v].id +
                            "' leaf flag contradicts its edges");
    }
  }
  check_event_tree(tree);

  // Stages: lists of situation ids.
  const auto& stages_json = field(doc, "stages");
  if (!stages_json.is_array()) throw ParseError("document: field 'stages' must be an array");
  std::vector<std::vector<int>> stages;
  for (const auto& group : stages_json) {
    if (!group.is_array()) throw ParseError("document: field 'stages' must hold arrays");
    std::vector<int> members;
    for (const auto& id : group) {
      if (!id.is_string()) throw ParseError("document: stage members must be node ids");
      auto it = index.find(id.get<std::string>());
      if (it == index.end()) {
        throw ValidationError("document: stage member '" + id.get<std::string>() +
                              "' is not a listed node");
      }
      members.push_back(it->second);
    }
    stages.push_back(std::move(members));
  }

  std::optional<std::vector<std::vector<double>>> theta;
  if (auto it = doc.find("theta"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("document: field 'theta' must be an array");
    theta.emplace();
    for (const auto& row : *it) {
      if (!row.is_array()) throw ParseError("document: field 'theta' must hold arrays");
      std::vector<double> values;
      for (const auto& p : row) {
        if (!p.is_number()) throw ParseError("document: theta entries must be numbers");
        values.push_back(p.get<double>());
      }
      theta->push_back(std::move(values));
    }
  }

  TreeDocument result;
  result.st = make_staged_tree(tree, stages, theta);

  if (auto it = doc.find("counts"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("document: field 'counts' must be an object");
    EdgeCounts counts = EdgeCounts::zeros(tree);
    auto order = edge_order(tree);
    std::unordered_map<std::string, size_t> edge_pos;
    for (size_t i = 0; i < edge_ids.size(); ++i) edge_pos[edge_ids[i]] = i;
    size_t assigned = 0;
    for (const auto& [key, value] : it->items()) {
      auto pos = edge_pos.find(key);
      if (pos == edge_pos.end()) {
        throw ValidationError("document: count for unknown edge '" + key + "'");
      }
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw ValidationError("document: count for edge '" + key +
                              "' must be a nonnegative integer");
      }
      // Edge ids were recorded in document order; counts index by (node, k).
      auto [v, k] = order[pos->second];
      counts.n[static_cast<size_t>(v)][static_cast<size_t>(k)] = value.get<std::int64_t>();
      ++assigned;
    }
    if (assigned != edge_ids.size()) {
      throw ValidationError("document: counts must cover every edge");
    }
    // Counts must be consistent with some routing: conserved flow at every
    // inner situation.
    for (int v = 0; v < tree.node_count(); ++v) {
      const auto& node = tree.at(v);
      if (node.is_leaf() || v == tree.root) continue;
      std::int64_t in = counts.at(node.parent, node.edge_in_parent);
      std::int64_t out = 0;
      for (size_t k = 0; k < node.children.size(); ++k) {
        out += counts.at(v, static_cast<int>(k));
      }
      if (in != out) {
        throw ValidationError("document: counts at node '" + node.id +
                              "' do not conserve flow (" + std::to_string(in) + " in, " +
                              std::to_string(out) + " out)");
      }
    }
    result.counts = std::move(counts);
  }

  if (auto it = doc.find("alpha"); it != doc.end()) {
    if (!it->is_number()) throw ParseError("document: field 'alpha' must be a number");
    double alpha = it->get<double>();
    if (!(alpha > 0)) throw ValidationError("document: alpha must be positive");
    result.alpha = alpha;
  }
  if (auto it = doc.find("method"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("document: field 'method' must be a string");
    result.method = method_from_string(it->get<std::string>());
  }
  return result;
}

namespace {

// The edges of load_tree's input were renamed on save; loading keyed counts
// back relies on save and load enumerating edges identically (depth-first).
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("file: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TreeDocument load_tree(const std::string& path) {
  return load_tree_text(read_file(path));
}

std::string save_tree_text(const TreeDocument& doc) {
  const EventTree& tree = doc.st.tree;
  ordered_json out;
  out["schema"] = kSchemaVersion;
  out["root"] = tree.at(tree.root).id;

  auto nodes = ordered_json::array();
  for (int v : tree.breadth_first_order()) {
    nodes.push_back({{"id", tree.at(v).id}, {"leaf", tree.at(v).is_leaf()}});
  }
  out["nodes"] = std::move(nodes);

  auto order = edge_order(tree);
  auto edges = ordered_json::array();
  for (size_t i = 0; i < order.size(); ++i) {
    auto [v, k] = order[i];
    edges.push_back({{"id", "e" + std::to_string(i)},
                     {"from", tree.at(v).id},
                     {"to", tree.at(tree.at(v).children[static_cast<size_t>(k)]).id},
                     {"label", tree.at(v).labels[static_cast<size_t>(k)]}});
  }
  out["edges"] = std::move(edges);

  auto stages = ordered_json::array();
  for (const auto& members : doc.st.stages) {
    auto group = ordered_json::array();
    for (int v : members) group.push_back(tree.at(v).id);
    stages.push_back(std::move(group));
  }
  out["stages"] = std::move(stages);

  if (doc.counts.has_value()) {
    auto counts = ordered_json::object();
    for (size_t i = 0; i < order.size(); ++i) {
      auto [v, k] = order[i];
      counts["e" + std::to_string(i)] = doc.counts->at(v, k);
    }
    out["counts"] = std::move(counts);
  }
  if (doc.alpha.has_value()) out["alpha"] = *doc.alpha;
  if (doc.method.has_value()) out["method"] = method_to_string(*doc.method);
  if (doc.st.theta.has_value()) out["theta"] = *doc.st.theta;

  return out.dump(2) + "\n";
}

void save_tree(const TreeDocument& doc, const std::string& path) {
  std::string text = save_tree_text(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("file: cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("file: write to '" + path + "' failed");
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    size_t begin = cell.find_first_not_of(" \t\r");
    size_t end = cell.find_last_not_of(" \t\r");
    cells.push_back(begin == std::string::npos ? "" : cell.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_count_header(const std::string& cell) {
  std::string lower;
  for (char c : cell) lower.push_back(static_cast<char>(std::tolower(c)));
  return lower == "count";
}

}  // namespace

Dataset load_dataset_text(const std::string& csv_text) {
  std::istringstream stream(csv_text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv_row(line));
    rows.back().insert(rows.back().begin(), std::to_string(line_no));  // keep origin for errors
  }
  if (rows.empty()) throw ParseError("dataset: empty file (a header row is required)");

  auto header = rows.front();
  header.erase(header.begin());
  bool has_count = !header.empty() && is_count_header(header.back());
  size_t width = header.size();
  size_t symbols = has_count ? width - 1 : width;
  if (symbols == 0) throw ParseError("dataset: header has no variable columns");

  Dataset data;
  data.columns.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(symbols));
  for (size_t r = 1; r < rows.size(); ++r) {
    std::string origin = rows[r].front();
    std::vector<std::string> cells(rows[r].begin() + 1, rows[r].end());
    if (cells.size() != width) {
      throw ParseError("dataset: line " + origin + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(width));
    }
    for (size_t i = 0; i < symbols; ++i) {
      if (cells[i].empty()) {
        throw ParseError("dataset: line " + origin +
                         " has an empty cell; records must be complete label paths");
      }
    }
    std::int64_t copies = 1;
    if (has_count) {
      const std::string& text = cells.back();
      try {
        size_t used = 0;
        copies = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        throw ParseError("dataset: line " + origin + " count '" + text +
                         "' is not an integer");
      }
      if (copies < 0) {
        throw ParseError("dataset: line " + origin + " count must be nonnegative");
      }
    }
    std::vector<std::string> record(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(symbols));
    for (std::int64_t c = 0; c < copies; ++c) data.records.push_back(record);
  }
  return data;
}

Dataset load_dataset(const std::string& path) {
  return load_dataset_text(read_file(path));
}

}  // namespace stagetree
