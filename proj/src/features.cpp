#include "fairhin/features.hpp"

#include <stdexcept>

#include "fairhin/embedding.hpp"
#include "fairhin/rng.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

FeatureMatrix build_features(
    const HinGraph& g,
    const std::unordered_map<std::string, std::vector<std::string>>& item_texts, int dim) {
  if (dim <= 0) fail("build_features: dim must be positive");

  FeatureMatrix X;
  X.dim = dim;
  X.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_nodes()), dim);
  X.covered.assign(g.num_nodes(), 0);

  // Item rows: averaged signed hashed token contributions.
  TypeId item_type = 0;
  bool have_item_type = false;
  for (const auto& [id, tokens] : item_texts) {
    auto v = g.find_node(id);
    if (!v) fail("build_features: item '" + id + "' not in the graph");
    TypeId t = g.node_type(*v);
    if (t == g.protected_type())
      fail("build_features: item '" + id + "' is of the protected (user) type");
    if (have_item_type && t != item_type)
      fail("build_features: item texts span more than one node type");
    item_type = t;
    have_item_type = true;

    X.covered[*v] = 1;
    if (tokens.empty()) continue;
    for (const std::string& tok : tokens) {
      const std::uint64_t h = fnv1a64(tok);
      const int coord = static_cast<int>(h % static_cast<std::uint64_t>(dim));
      const double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
      X.rows(*v, coord) += sign;
    }
    X.rows.row(*v) /= static_cast<double>(tokens.size());
  }
  if (!have_item_type) fail("build_features: no item texts given");

  // User rows: mean of linked item rows.
  for (NodeId u : g.nodes_of_type(g.protected_type())) {
    X.covered[u] = 1;
    auto items = g.neighbors_by_type(u, item_type);
    if (items.empty()) continue;
    for (NodeId it : items) X.rows.row(u) += X.rows.row(it);
    X.rows.row(u) /= static_cast<double>(items.size());
  }
  return X;
}

void save_features(const std::string& path, const HinGraph& g, const FeatureMatrix& X) {
  EmbeddingTable t;
  t.dim = X.dim;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!X.covered[v]) continue;
    t.index.emplace(g.original_id(v), t.ids.size());
    t.ids.push_back(g.original_id(v));
    std::vector<double> row(X.dim);
    for (int j = 0; j < X.dim; ++j) row[j] = X.rows(v, j);
    t.vec.push_back(std::move(row));
  }
  save_embeddings(path, t);
}

FeatureMatrix load_features(const std::string& path, const HinGraph& g) {
  EmbeddingTable t = load_embeddings(path);
  FeatureMatrix X;
  X.dim = t.dim;
  X.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.num_nodes()), t.dim);
  X.covered.assign(g.num_nodes(), 0);
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    auto v = g.find_node(t.ids[i]);
    if (!v) fail("load_features: node '" + t.ids[i] + "' not in the graph");
    X.covered[*v] = 1;
    for (int j = 0; j < t.dim; ++j) X.rows(*v, j) = t.vec[i][j];
  }
  return X;
}

}  // namespace fairhin
