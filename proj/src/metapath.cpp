#include "fairhin/metapath.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fairhin/rng.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr const char* kCareerType = "career";

}  // namespace

TransitionDist transition_standard(const HinGraph& g, NodeId v, const std::string& next_type) {
  auto nbrs = g.neighbors_by_type(v, next_type);
  TransitionDist d;
  if (nbrs.empty()) return d;
  const double p = 1.0 / static_cast<double>(nbrs.size());
  d.nodes.assign(nbrs.begin(), nbrs.end());
  d.prob.assign(nbrs.size(), p);
  return d;
}

TransitionDist transition_fair(const HinGraph& g, NodeId v, double r, bool literal_r) {
  auto career = g.type_id(kCareerType);
  if (!career || g.node_type(v) != *career)
    fail("transition_fair: node '" + g.original_id(v) + "' is not a career node");
  if (r < 1.0) fail("transition_fair: ratio r must be >= 1");

  const std::uint8_t adv = g.advantaged_group();
  const std::uint8_t dis = g.disadvantaged_group();
  auto adv_nbrs = g.neighbors_by_type_and_group(v, g.protected_type(), adv);
  auto dis_nbrs = g.neighbors_by_type_and_group(v, g.protected_type(), dis);

  TransitionDist d;
  if (adv_nbrs.empty() && dis_nbrs.empty()) return d;

  // Unnormalized per-member mass; zero for an empty group.
  const double w_adv = adv_nbrs.empty()
                           ? 0.0
                           : (literal_r ? r : 1.0) / static_cast<double>(adv_nbrs.size());
  const double w_dis = dis_nbrs.empty() ? 0.0 : r / static_cast<double>(dis_nbrs.size());

  const std::size_t total = adv_nbrs.size() + dis_nbrs.size();
  d.nodes.reserve(total);
  d.prob.reserve(total);
  // Merge the two sorted group lists back into ascending-id order.
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < adv_nbrs.size() || j < dis_nbrs.size()) {
    bool take_adv = j >= dis_nbrs.size() || (i < adv_nbrs.size() && adv_nbrs[i] < dis_nbrs[j]);
    if (take_adv) {
      d.nodes.push_back(adv_nbrs[i++]);
      d.prob.push_back(w_adv);
      sum += w_adv;
    } else {
      d.nodes.push_back(dis_nbrs[j++]);
      d.prob.push_back(w_dis);
      sum += w_dis;
    }
  }
  for (double& p : d.prob) p /= sum;
  return d;
}

NodeId sample_from(const TransitionDist& d, double u) {
  if (d.empty()) fail("sample_from: empty distribution");
  double cum = 0.0;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    cum += d.prob[i];
    if (u < cum) return d.nodes[i];
  }
  return d.nodes.back();  // u landed in the rounding tail
}

void validate_metapath(const HinGraph& g, const MetaPath& mp, int walk_length) {
  if (mp.steps.empty()) fail("metapath '" + mp.name + "': no steps");
  if (!g.type_id(mp.start_type))
    fail("metapath '" + mp.name + "': unknown start type '" + mp.start_type + "'");
  std::string prev = mp.start_type;
  for (const MetaPathStep& s : mp.steps) {
    auto tid = g.type_id(s.node_type);
    if (!tid) fail("metapath '" + mp.name + "': unknown node type '" + s.node_type + "'");
    bool found = false;
    for (const RelationDecl& rd : g.relations()) {
      if (rd.name != s.relation) continue;
      const std::string& a = g.type_name(rd.src_type);
      const std::string& b = g.type_name(rd.dst_type);
      if ((a == prev && b == s.node_type) || (a == s.node_type && b == prev)) {
        found = true;
        break;
      }
    }
    if (!found)
      fail("metapath '" + mp.name + "': relation '" + s.relation + "' does not connect '" + prev +
           "' and '" + s.node_type + "'");
    prev = s.node_type;
  }
  if (walk_length > 1 && prev != mp.start_type)
    fail("metapath '" + mp.name + "': not cyclic, cannot repeat it " +
         std::to_string(walk_length) + " times");
}

std::vector<Walk> generate_walks(const HinGraph& g, const MetaPath& mp,
                                 const SamplerConfig& cfg) {
  if (cfg.walk_length < 1) fail("generate_walks: walk_length must be >= 1");
  if (cfg.num_walks_per_start < 1) fail("generate_walks: num_walks_per_start must be >= 1");
  if (cfg.fair_ratio < 1.0) fail("generate_walks: fair ratio must be >= 1");
  validate_metapath(g, mp, cfg.walk_length);

  const bool fair = cfg.mode == SamplerConfig::Mode::fair;
  auto career = g.type_id(kCareerType);
  const std::string protected_name = g.type_name(g.protected_type());
  const std::size_t cycle = mp.steps.size();
  const std::size_t total_steps = cycle * static_cast<std::size_t>(cfg.walk_length);

  std::vector<Walk> corpus;
  for (NodeId start : g.nodes_of_type(mp.start_type)) {
    for (int k = 0; k < cfg.num_walks_per_start; ++k) {
      Rng rng(derive_seed(cfg.seed, "walk", {start, static_cast<std::uint64_t>(k)}));
      Walk walk{start};
      NodeId cur = start;
      for (std::size_t s = 0; s < total_steps; ++s) {
        const MetaPathStep& step = mp.steps[s % cycle];
        TransitionDist dist;
        if (fair && career && g.node_type(cur) == *career && step.node_type == protected_name)
          dist = transition_fair(g, cur, cfg.fair_ratio, cfg.literal_r);
        else
          dist = transition_standard(g, cur, step.node_type);
        if (dist.empty()) break;  // dead end, emit what we have
        cur = sample_from(dist, rng.u01());
        walk.push_back(cur);
      }
      if (walk.size() >= 2) corpus.push_back(std::move(walk));
    }
  }
  return corpus;
}

std::vector<MetaPath> builtin_metapaths(const HinGraph& g) {
  auto need = [&](const char* t) {
    if (!g.type_id(t)) fail(std::string("builtin_metapaths: graph has no '") + t + "' type");
    return *g.type_id(t);
  };
  TypeId career = need(kCareerType);
  TypeId item = need("item");
  TypeId user = g.protected_type();

  auto find_relation = [&](TypeId a, TypeId b, const char* what) {
    const RelationDecl* found = nullptr;
    for (const RelationDecl& rd : g.relations()) {
      bool match = (rd.src_type == a && rd.dst_type == b) || (rd.src_type == b && rd.dst_type == a);
      if (!match) continue;
      if (found) fail(std::string("builtin_metapaths: multiple relations connect ") + what);
      found = &rd;
    }
    if (!found) fail(std::string("builtin_metapaths: no relation connects ") + what);
    return found->name;
  };
  const std::string choose = find_relation(career, user, "career and user");
  const std::string like = find_relation(user, item, "user and item");
  const std::string u = g.type_name(user);

  MetaPath cuiuc{"cuiuc", kCareerType,
                 {{choose, u}, {like, "item"}, {like, u}, {choose, kCareerType}}};
  MetaPath uiu{"uiu", u, {{like, "item"}, {like, u}}};
  return {cuiuc, uiu};
}

void write_walks(const std::string& path, const std::vector<Walk>& walks, const HinGraph& g) {
  std::ofstream out(path);
  if (!out) fail("write_walks: cannot open '" + path + "'");
  for (const Walk& w : walks) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << g.original_id(w[i]);
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> read_walks(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_walks: cannot open '" + path + "'");
  std::vector<std::vector<std::string>> walks;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    if (!toks.empty()) walks.push_back(std::move(toks));
  }
  return walks;
}

}  // namespace fairhin
