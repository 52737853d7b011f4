#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairhin/graph.hpp"

namespace fairhin {

// Per-node feature rows for user and item nodes; career rows stay zero and
// are excluded from aggregation.
struct FeatureMatrix {
  int dim = 0;
  Eigen::MatrixXd rows;        // num_nodes x dim
  std::vector<char> covered;   // 1 for nodes that carry features
};

// Item features come from deterministic feature hashing of the item's text
// tokens (token -> signed unit contribution on a hashed coordinate, averaged
// over tokens); user features are the mean of the linked items' rows. Items
// with empty text and users without items get the zero vector.
FeatureMatrix build_features(
    const HinGraph& g,
    const std::unordered_map<std::string, std::vector<std::string>>& item_texts, int dim = 50);

// Text I/O in the embedding file format, keyed by original node id.
void save_features(const std::string& path, const HinGraph& g, const FeatureMatrix& X);
FeatureMatrix load_features(const std::string& path, const HinGraph& g);

}  // namespace fairhin
