#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fairhin/graph.hpp"
#include "fairhin/rng.hpp"

namespace fairhin::test {

// Small career/user/item HIN: every user likes >= 1 item and chooses exactly
// one career; both groups are always populated.
struct TinyHin {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;

  HinGraph build() const { return build_graph(nodes, edges, "gender"); }
};

inline TinyHin random_hin(Rng& rng, int users, int items, int careers) {
  TinyHin t;
  for (int c = 0; c < careers; ++c) t.nodes.push_back({"c" + std::to_string(c), "career", ""});
  for (int i = 0; i < items; ++i) t.nodes.push_back({"i" + std::to_string(i), "item", ""});
  for (int u = 0; u < users; ++u) {
    // alternate the first two users so both groups are non-empty
    const bool g1 = u < 2 ? (u == 1) : rng.u01() < 0.5;
    t.nodes.push_back({"u" + std::to_string(u), "user", g1 ? "g1" : "g0"});
    const std::string uid = "u" + std::to_string(u);
    t.edges.push_back({uid, "choose", "c" + std::to_string(static_cast<int>(rng.index(careers)))});
    const int likes = 1 + static_cast<int>(rng.index(4));
    for (int l = 0; l < likes; ++l)
      t.edges.push_back({uid, "like", "i" + std::to_string(static_cast<int>(rng.index(items)))});
  }
  return t;
}

// Brute-force neighbor scan over the raw edge list (the oracle the adjacency
// indexes are checked against).
inline std::vector<std::string> scan_neighbors(const TinyHin& t, const std::string& id,
                                               const std::string& type) {
  std::map<std::string, std::string> type_of;
  for (const auto& n : t.nodes) type_of[n.id] = n.type;
  std::set<std::string> out;
  for (const auto& e : t.edges) {
    if (e.src == id && type_of.at(e.dst) == type) out.insert(e.dst);
    if (e.dst == id && type_of.at(e.src) == type) out.insert(e.src);
  }
  return {out.begin(), out.end()};
}

inline std::vector<std::string> ids_of(const HinGraph& g, std::span<const NodeId> nodes) {
  std::vector<std::string> out;
  for (NodeId v : nodes) out.push_back(g.original_id(v));
  return out;
}

// Central finite difference of a scalar function at coordinate x, step eps.
template <typename F, typename Get, typename Set>
double central_difference(F&& f, Get&& get, Set&& set, double eps = 1e-5) {
  const double orig = get();
  set(orig + eps);
  const double fp = f();
  set(orig - eps);
  const double fm = f();
  set(orig);
  return (fp - fm) / (2.0 * eps);
}

// Relative error with an absolute floor for near-zero pairs.
inline double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

}  // namespace fairhin::test
