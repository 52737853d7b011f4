#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairhin/graph.hpp"

namespace fairhin {

struct MetaPathStep {
  std::string relation;
  std::string node_type;  // type of the node reached by this step
};

// A template sequence of node types and relations, e.g.
//   career -choose- user -like- item -like- user -choose- career.
// Transitions are type-guided; the relation names document the path and are
// validated against the graph's relation declarations.
struct MetaPath {
  std::string name;
  std::string start_type;
  std::vector<MetaPathStep> steps;

  std::size_t length() const { return steps.size(); }  // edges per repetition
};

struct SamplerConfig {
  enum class Mode { standard, fair };
  int num_walks_per_start = 10;
  int walk_length = 10;  // meta-path repetitions, >= 1
  double fair_ratio = 1.0;  // r >= 1
  std::uint64_t seed = 0;
  Mode mode = Mode::standard;
  // Apply r to both group branches (the printed form of the fair kernel,
  // where r cancels under normalization). Kept for comparison runs only.
  bool literal_r = false;
};

using Walk = std::vector<NodeId>;

// Probability map over candidate next nodes, ascending by id. Empty = dead
// end, the walk terminates.
struct TransitionDist {
  std::vector<NodeId> nodes;
  std::vector<double> prob;

  bool empty() const { return nodes.empty(); }
  std::size_t size() const { return nodes.size(); }
};

/// Uniform over v's neighbors of next_type; empty map at a dead end.
TransitionDist transition_standard(const HinGraph& g, NodeId v, const std::string& next_type);

// Fairness-aware career->user kernel: per-member unnormalized mass is
// 1/|N(v,U,g_adv)| for the advantaged group and r/|N(v,U,g_dis)| for the
// disadvantaged one, zero for an empty group, then normalized. With both
// groups non-empty the aggregate group masses are 1/(1+r) and r/(1+r).
// v must be a career node.
TransitionDist transition_fair(const HinGraph& g, NodeId v, double r, bool literal_r = false);

/// Cumulative-sum inversion at u in [0,1) over the ascending-id order.
NodeId sample_from(const TransitionDist& d, double u);

// Throws if the meta-path names unknown types/relations, a step's relation
// does not connect the adjacent types, or the path is not cyclable while
// walk_length would repeat it.
void validate_metapath(const HinGraph& g, const MetaPath& mp, int walk_length);

// One walk corpus: num_walks_per_start walks from every node of the start
// type, each up to walk_length repetitions of the meta-path, truncated at
// dead ends (walks shorter than 2 nodes are dropped). In fair mode the
// career->user steps use transition_fair. Fully determined by cfg.seed.
std::vector<Walk> generate_walks(const HinGraph& g, const MetaPath& mp,
                                 const SamplerConfig& cfg);

// The two built-in paths, bound to the graph's type and relation names:
//   cuiuc: career-user-item-user-career
//   uiu:   user-item-user
// Requires types "career", "item" and the protected (user) type.
std::vector<MetaPath> builtin_metapaths(const HinGraph& g);

// Walk corpus file: one walk per line, space-separated original node ids.
void write_walks(const std::string& path, const std::vector<Walk>& walks, const HinGraph& g);
std::vector<std::vector<std::string>> read_walks(const std::string& path);

}  // namespace fairhin
