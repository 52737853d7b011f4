#include "fairhin/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

std::optional<TypeId> HinGraph::type_id(const std::string& name) const {
  auto it = type_index_.find(name);
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> HinGraph::find_node(const std::string& original_id) const {
  auto it = id_index_.find(original_id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

NodeId HinGraph::node(const std::string& original_id) const {
  auto v = find_node(original_id);
  if (!v) fail("HinGraph: unknown node id '" + original_id + "'");
  return *v;
}

const std::vector<NodeId>& HinGraph::nodes_of_type(const std::string& t) const {
  auto tid = type_id(t);
  if (!tid) fail("HinGraph: unknown node type '" + t + "'");
  return by_type_[*tid];
}

std::span<const NodeId> HinGraph::neighbors_by_type(NodeId v, TypeId t) const {
  if (v >= num_nodes()) fail("neighbors_by_type: unknown node id");
  const auto& bucket = adj_[v].at(t);
  return {bucket.data(), bucket.size()};
}

std::span<const NodeId> HinGraph::neighbors_by_type(NodeId v, const std::string& t) const {
  auto tid = type_id(t);
  if (!tid) fail("neighbors_by_type: unknown node type '" + t + "'");
  return neighbors_by_type(v, *tid);
}

std::span<const NodeId> HinGraph::neighbors_by_type_and_group(NodeId v, TypeId t,
                                                              std::uint8_t group) const {
  if (v >= num_nodes()) fail("neighbors_by_type_and_group: unknown node id");
  if (t != protected_type_)
    fail("neighbors_by_type_and_group: type '" + type_name(t) + "' is not the protected type");
  if (group > 1) fail("neighbors_by_type_and_group: group index must be 0 or 1");
  const auto& bucket = adj_group_[v][group];
  return {bucket.data(), bucket.size()};
}

std::span<const NodeId> HinGraph::neighbors_by_type_and_group(NodeId v, const std::string& t,
                                                              std::uint8_t group) const {
  auto tid = type_id(t);
  if (!tid) fail("neighbors_by_type_and_group: unknown node type '" + t + "'");
  return neighbors_by_type_and_group(v, *tid, group);
}

HinGraph build_graph(const std::vector<NodeSpec>& nodes, const std::vector<EdgeSpec>& edges,
                     const std::string& attr_name) {
  HinGraph g;
  g.attr_name_ = attr_name;

  // Nodes and types, in input order.
  g.node_types_.reserve(nodes.size());
  g.node_ids_.reserve(nodes.size());
  for (const NodeSpec& n : nodes) {
    if (g.id_index_.count(n.id)) fail("build_graph: duplicate node id '" + n.id + "'");
    TypeId tid;
    auto it = g.type_index_.find(n.type);
    if (it == g.type_index_.end()) {
      tid = static_cast<TypeId>(g.type_names_.size());
      g.type_names_.push_back(n.type);
      g.type_index_.emplace(n.type, tid);
    } else {
      tid = it->second;
    }
    NodeId id = static_cast<NodeId>(g.node_ids_.size());
    g.id_index_.emplace(n.id, id);
    g.node_ids_.push_back(n.id);
    g.node_types_.push_back(tid);
  }
  if (g.type_names_.size() < 2) fail("build_graph: a HIN needs more than one node type");

  // Protected attribute: exactly one type carries labels, every node of that
  // type is labeled, and exactly two distinct labels exist.
  std::set<std::string> label_names;
  std::set<TypeId> labeled_types;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].group.empty()) {
      label_names.insert(nodes[i].group);
      labeled_types.insert(g.node_types_[i]);
    }
  }
  if (labeled_types.empty()) fail("build_graph: no node carries a protected-attribute label");
  if (labeled_types.size() > 1)
    fail("build_graph: protected-attribute labels appear on more than one node type");
  if (label_names.size() != 2)
    fail("build_graph: expected exactly two group labels, found " +
         std::to_string(label_names.size()));
  g.protected_type_ = *labeled_types.begin();
  auto ln = label_names.begin();
  g.group_names_[0] = *ln++;
  g.group_names_[1] = *ln;

  g.groups_.assign(nodes.size(), kNoGroup);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (g.node_types_[i] == g.protected_type_) {
      if (nodes[i].group.empty())
        fail("build_graph: node '" + nodes[i].id + "' of the protected type has no group label");
      g.groups_[i] = nodes[i].group == g.group_names_[0] ? 0 : 1;
      ++g.group_sizes_[g.groups_[i]];
    }
  }
  // Ties go to group 0 (the lexicographically smaller label).
  g.advantaged_ = g.group_sizes_[1] > g.group_sizes_[0] ? 1 : 0;

  // Edges. First use of a relation fixes its endpoint orientation.
  std::set<std::tuple<NodeId, NodeId, RelationId>> seen;
  g.edges_.reserve(edges.size());
  for (const EdgeSpec& e : edges) {
    auto su = g.find_node(e.src);
    auto sv = g.find_node(e.dst);
    if (!su) fail("build_graph: edge references unknown node '" + e.src + "'");
    if (!sv) fail("build_graph: edge references unknown node '" + e.dst + "'");
    NodeId u = *su, v = *sv;
    if (u == v) fail("build_graph: self-loop on node '" + e.src + "'");
    TypeId tu = g.node_types_[u], tv = g.node_types_[v];

    RelationId rid;
    auto it = g.relation_index_.find(e.relation);
    if (it == g.relation_index_.end()) {
      rid = static_cast<RelationId>(g.relations_.size());
      g.relations_.push_back({e.relation, tu, tv});
      g.relation_index_.emplace(e.relation, rid);
    } else {
      rid = it->second;
      const RelationDecl& d = g.relations_[rid];
      bool forward = (tu == d.src_type && tv == d.dst_type);
      bool backward = (tu == d.dst_type && tv == d.src_type);
      if (!forward && !backward)
        fail("build_graph: edge '" + e.src + "' -[" + e.relation + "]- '" + e.dst +
             "' does not match relation types " + g.type_names_[d.src_type] + "-" +
             g.type_names_[d.dst_type]);
    }
    // Parallel duplicates collapse to one edge.
    auto key = std::make_tuple(std::min(u, v), std::max(u, v), rid);
    if (!seen.insert(key).second) continue;
    g.edges_.push_back({u, v, rid});
  }

  // Indexes.
  const std::size_t n = g.num_nodes();
  const std::size_t nt = g.num_types();
  g.by_type_.assign(nt, {});
  for (NodeId v = 0; v < n; ++v) g.by_type_[g.node_types_[v]].push_back(v);

  g.adj_.assign(n, std::vector<std::vector<NodeId>>(nt));
  g.adj_group_.assign(n, {});
  for (const Edge& e : g.edges_) {
    g.adj_[e.u][g.node_types_[e.v]].push_back(e.v);
    g.adj_[e.v][g.node_types_[e.u]].push_back(e.u);
  }
  for (NodeId v = 0; v < n; ++v) {
    for (auto& bucket : g.adj_[v]) std::sort(bucket.begin(), bucket.end());
    for (NodeId u : g.adj_[v][g.protected_type_]) g.adj_group_[v][g.groups_[u]].push_back(u);
    // group buckets inherit ascending order from the sorted type bucket
  }
  return g;
}

namespace {

std::vector<std::vector<std::string>> read_tsv(const std::string& path, std::size_t cols,
                                               const char* what) {
  std::ifstream in(path);
  if (!in) fail(std::string(what) + ": cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != cols)
      fail(std::string(what) + ": " + path + ":" + std::to_string(lineno) + ": expected " +
           std::to_string(cols) + " tab-separated fields, got " + std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::vector<NodeSpec> read_node_tsv(const std::string& path) {
  std::vector<NodeSpec> out;
  for (auto& f : read_tsv(path, 3, "node table")) {
    NodeSpec n;
    n.id = std::move(f[0]);
    n.type = std::move(f[1]);
    if (f[2] != "-") n.group = std::move(f[2]);
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<EdgeSpec> read_edge_tsv(const std::string& path) {
  std::vector<EdgeSpec> out;
  for (auto& f : read_tsv(path, 3, "edge list"))
    out.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2])});
  return out;
}

void write_node_tsv(const std::string& path, const HinGraph& g) {
  std::ofstream out(path);
  if (!out) fail("write_node_tsv: cannot open '" + path + "'");
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    std::uint8_t grp = g.group_of(v);
    out << g.original_id(v) << '\t' << g.type_name(g.node_type(v)) << '\t'
        << (grp == kNoGroup ? "-" : g.group_name(grp)) << '\n';
  }
}

void write_edge_tsv(const std::string& path, const HinGraph& g) {
  std::ofstream out(path);
  if (!out) fail("write_edge_tsv: cannot open '" + path + "'");
  for (const Edge& e : g.edges())
    out << g.original_id(e.u) << '\t' << g.relations()[e.rel].name << '\t' << g.original_id(e.v)
        << '\n';
}

HinGraph load_graph_tsv(const std::string& nodes_path, const std::string& edges_path,
                        const std::string& attr_name) {
  return build_graph(read_node_tsv(nodes_path), read_edge_tsv(edges_path), attr_name);
}

}  // namespace fairhin
