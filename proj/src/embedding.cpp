#include "fairhin/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairhin {

const std::vector<double>& EmbeddingTable::at(const std::string& id) const {
  auto it = index.find(id);
  if (it == index.end()) throw std::runtime_error("EmbeddingTable: missing id '" + id + "'");
  return vec[it->second];
}

std::vector<double>& EmbeddingTable::at(const std::string& id) {
  auto it = index.find(id);
  if (it == index.end()) throw std::runtime_error("EmbeddingTable: missing id '" + id + "'");
  return vec[it->second];
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_embeddings: cannot open '" + path + "'");
  out << table.ids.size() << ' ' << table.dim << '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    out << table.ids[i];
    for (double x : table.vec[i]) {
      std::snprintf(buf, sizeof buf, " %.9g", x);
      out << buf;
    }
    out << '\n';
  }
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_embeddings: cannot open '" + path + "'");
  std::size_t n = 0;
  int d = 0;
  std::string header;
  if (!std::getline(in, header) || std::sscanf(header.c_str(), "%zu %d", &n, &d) != 2 || d <= 0)
    throw std::runtime_error("load_embeddings: bad header in '" + path + "'");
  EmbeddingTable t;
  t.dim = d;
  t.ids.reserve(n);
  t.vec.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id;
    ss >> id;
    std::vector<double> v(d);
    for (int j = 0; j < d; ++j) {
      if (!(ss >> v[j]))
        throw std::runtime_error("load_embeddings: short row for '" + id + "' in '" + path + "'");
    }
    t.index.emplace(id, t.ids.size());
    t.ids.push_back(std::move(id));
    t.vec.push_back(std::move(v));
  }
  if (t.ids.size() != n)
    throw std::runtime_error("load_embeddings: row count mismatch in '" + path + "'");
  return t;
}

}  // namespace fairhin
