#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace fairhin {

// Dense vectors keyed by original node id. `vec` holds the center vectors;
// `ctx` the companion context table from training (empty for tables loaded
// from files). Ids are kept in lexicographic order so every table derived
// from the same corpus lines up.
struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<double>> vec;
  std::vector<std::vector<double>> ctx;

  bool contains(const std::string& id) const { return index.count(id) != 0; }
  const std::vector<double>& at(const std::string& id) const;
  std::vector<double>& at(const std::string& id);
  std::size_t size() const { return ids.size(); }
};

// Text format: first line "N d", then one line per node,
// "node_id v1 v2 ... vd" with 9 significant digits.
void save_embeddings(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace fairhin
