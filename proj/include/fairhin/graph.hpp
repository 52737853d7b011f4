#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fairhin {

// Dense node handle, assigned in input order at build time. Original string
// ids are kept in a side map for files and reporting.
using NodeId = std::uint32_t;
using TypeId = std::uint16_t;
using RelationId = std::uint16_t;

inline constexpr std::uint8_t kNoGroup = 0xff;

struct NodeSpec {
  std::string id;
  std::string type;
  std::string group;  // empty = no protected label
};

struct EdgeSpec {
  std::string src;
  std::string relation;
  std::string dst;
};

struct RelationDecl {
  std::string name;
  TypeId src_type = 0;
  TypeId dst_type = 0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  RelationId rel = 0;
};

// Immutable typed multigraph with per-(type) and per-(type, group) adjacency
// indexes. Edges are undirected: every relation implicitly defines its
// inverse, which is how the meta-paths traverse "liked by" / "chosen by".
//
// Exactly one node type carries the binary protected attribute; group index
// 0/1 follows the lexicographic order of the two label strings. The
// advantaged group is fixed once at build time as the globally larger one.
class HinGraph {
 public:
  HinGraph() = default;

  std::size_t num_nodes() const { return node_types_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_types() const { return type_names_.size(); }

  const std::string& type_name(TypeId t) const { return type_names_.at(t); }
  std::optional<TypeId> type_id(const std::string& name) const;
  TypeId node_type(NodeId v) const { return node_types_.at(v); }

  const std::string& original_id(NodeId v) const { return node_ids_.at(v); }
  std::optional<NodeId> find_node(const std::string& original_id) const;
  // Throwing lookup for callers that require the node to exist.
  NodeId node(const std::string& original_id) const;

  const std::vector<NodeId>& nodes_of_type(TypeId t) const { return by_type_.at(t); }
  const std::vector<NodeId>& nodes_of_type(const std::string& t) const;

  const std::vector<RelationDecl>& relations() const { return relations_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbors of v whose type is t, ascending by id.
  std::span<const NodeId> neighbors_by_type(NodeId v, TypeId t) const;
  std::span<const NodeId> neighbors_by_type(NodeId v, const std::string& t) const;

  /// Group-refined neighbors; t must be the protected type.
  std::span<const NodeId> neighbors_by_type_and_group(NodeId v, TypeId t,
                                                      std::uint8_t group) const;
  std::span<const NodeId> neighbors_by_type_and_group(NodeId v, const std::string& t,
                                                      std::uint8_t group) const;

  const std::string& attribute_name() const { return attr_name_; }
  TypeId protected_type() const { return protected_type_; }
  std::uint8_t group_of(NodeId v) const { return groups_.at(v); }
  const std::string& group_name(std::uint8_t g) const { return group_names_.at(g); }
  std::size_t group_size(std::uint8_t g) const { return group_sizes_.at(g); }
  std::uint8_t advantaged_group() const { return advantaged_; }
  std::uint8_t disadvantaged_group() const { return std::uint8_t(1 - advantaged_); }

  friend HinGraph build_graph(const std::vector<NodeSpec>&, const std::vector<EdgeSpec>&,
                              const std::string&);

 private:
  std::vector<std::string> type_names_;
  std::unordered_map<std::string, TypeId> type_index_;
  std::vector<RelationDecl> relations_;
  std::unordered_map<std::string, RelationId> relation_index_;

  std::vector<TypeId> node_types_;
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, NodeId> id_index_;
  std::vector<std::vector<NodeId>> by_type_;

  std::vector<Edge> edges_;
  // adj_[v][t] = neighbors of v with type t, sorted ascending.
  std::vector<std::vector<std::vector<NodeId>>> adj_;
  // adj_group_[v][g] = protected-type neighbors of v in group g, sorted.
  std::vector<std::array<std::vector<NodeId>, 2>> adj_group_;

  std::string attr_name_;
  TypeId protected_type_ = 0;
  std::vector<std::uint8_t> groups_;
  std::array<std::string, 2> group_names_;
  std::array<std::size_t, 2> group_sizes_{0, 0};
  std::uint8_t advantaged_ = 0;
};

// Builds all indexes. Relation endpoint orientation is fixed by the first
// edge that uses the relation; later edges must match it in either direction.
// Errors: duplicate node id, unknown endpoint, endpoint/relation type
// mismatch, self-loop, missing or stray group label, not exactly two groups,
// fewer than two node types.
HinGraph build_graph(const std::vector<NodeSpec>& nodes, const std::vector<EdgeSpec>& edges,
                     const std::string& attr_name = "group");

// TSV formats (UTF-8, LF):
//   node table: node_id<TAB>type<TAB>group-or-dash
//   edge list:  src_id<TAB>relation<TAB>dst_id
std::vector<NodeSpec> read_node_tsv(const std::string& path);
std::vector<EdgeSpec> read_edge_tsv(const std::string& path);
void write_node_tsv(const std::string& path, const HinGraph& g);
void write_edge_tsv(const std::string& path, const HinGraph& g);
HinGraph load_graph_tsv(const std::string& nodes_path, const std::string& edges_path,
                        const std::string& attr_name = "group");

}  // namespace fairhin
