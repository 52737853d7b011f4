#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fairhin/metapath.hpp"
#include "helpers.hpp"

using namespace fairhin;
using fairhin::test::TinyHin;

namespace {

// 3 disadvantaged (F) + 1 advantaged (M) users around one career.
TinyHin career_neighborhood() {
  TinyHin t;
  t.nodes = {{"c0", "career", ""}, {"i0", "item", ""},   {"f1", "user", "F"},
             {"f2", "user", "F"},  {"f3", "user", "F"},  {"m1", "user", "M"},
             {"m2", "user", "M"},  {"m3", "user", "M"},  {"m4", "user", "M"}};
  // global sizes: M=4 advantaged, F=3 disadvantaged; the career links 3F+1M
  t.edges = {{"f1", "choose", "c0"}, {"f2", "choose", "c0"}, {"f3", "choose", "c0"},
             {"m1", "choose", "c0"}, {"f1", "like", "i0"},   {"m2", "like", "i0"},
             {"m3", "like", "i0"},   {"m4", "like", "i0"}};
  return t;
}

double group_mass(const HinGraph& g, const TransitionDist& d, std::uint8_t grp) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (g.group_of(d.nodes[i]) == grp) s += d.prob[i];
  return s;
}

std::map<std::string, double> dist_by_id(const HinGraph& g, const TransitionDist& d) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < d.size(); ++i) out[g.original_id(d.nodes[i])] = d.prob[i];
  return out;
}

}  // namespace

TEST_CASE("standard kernel: singleton and uniform support") {
  TinyHin t;
  t.nodes = {{"u1", "user", "F"}, {"u2", "user", "M"}, {"i1", "item", ""}};
  t.edges = {{"u1", "like", "i1"}};
  HinGraph g = t.build();

  auto d = transition_standard(g, g.node("u1"), "item");
  REQUIRE(d.size() == 1);
  CHECK(d.prob[0] == 1.0);

  TinyHin quad;
  quad.nodes = {{"u1", "user", "F"}, {"u2", "user", "M"}};
  for (int i = 0; i < 4; ++i) {
    quad.nodes.push_back({"i" + std::to_string(i), "item", ""});
    quad.edges.push_back({"u1", "like", "i" + std::to_string(i)});
  }
  HinGraph q = quad.build();
  auto d4 = transition_standard(q, q.node("u1"), "item");
  REQUIRE(d4.size() == 4);
  for (double p : d4.prob) CHECK(p == doctest::Approx(0.25));

  CHECK(transition_standard(q, q.node("u2"), "item").empty());  // dead end
}

TEST_CASE("standard kernel matches enumerate-and-normalize oracle") {
  Rng rng(5);
  TinyHin t = fairhin::test::random_hin(rng, 30, 10, 3);
  HinGraph g = t.build();
  for (const auto& n : t.nodes) {
    for (const std::string& type : {"user", "item", "career"}) {
      auto expect_ids = fairhin::test::scan_neighbors(t, n.id, type);
      auto d = transition_standard(g, g.node(n.id), type);
      REQUIRE(d.size() == expect_ids.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d.prob[i] == doctest::Approx(1.0 / expect_ids.size()));
        sum += d.prob[i];
      }
      if (!d.empty()) CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fair kernel hand values (3 disadvantaged + 1 advantaged)") {
  HinGraph g = career_neighborhood().build();
  const NodeId c = g.node("c0");
  REQUIRE(g.group_name(g.disadvantaged_group()) == "F");

  SUBCASE("r=1: each F gets 1/6, M gets 1/2, group masses half and half") {
    auto d = dist_by_id(g, transition_fair(g, c, 1.0));
    CHECK(d.at("f1") == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(d.at("f2") == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(d.at("f3") == doctest::Approx(1.0 / 6).epsilon(1e-12));
    CHECK(d.at("m1") == doctest::Approx(0.5).epsilon(1e-12));
    auto full = transition_fair(g, c, 1.0);
    CHECK(group_mass(g, full, g.disadvantaged_group()) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("r=2: each F gets 2/9, M gets 1/3, masses 2/3 vs 1/3") {
    auto d = dist_by_id(g, transition_fair(g, c, 2.0));
    CHECK(d.at("f1") == doctest::Approx(2.0 / 9).epsilon(1e-12));
    CHECK(d.at("m1") == doctest::Approx(1.0 / 3).epsilon(1e-12));
    auto full = transition_fair(g, c, 2.0);
    CHECK(group_mass(g, full, g.disadvantaged_group()) ==
          doctest::Approx(2.0 / 3).epsilon(1e-12));
  }
  SUBCASE("single-group neighborhood: uniform over it, other group mass 0") {
    TinyHin t = career_neighborhood();
    t.edges[3] = {"m1", "like", "i0"};  // drop the advantaged choose edge
    HinGraph g2 = t.build();
    auto d = transition_fair(g2, g2.node("c0"), 4.0);
    REQUIRE(d.size() == 3);
    for (double p : d.prob) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(group_mass(g2, d, g2.advantaged_group()) == 0.0);
  }
  SUBCASE("literal form: r cancels, masses are half and half for any r") {
    auto d = transition_fair(g, c, 5.0, /*literal_r=*/true);
    CHECK(group_mass(g, d, g.disadvantaged_group()) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("non-career node rejected") {
    CHECK_THROWS_WITH_AS(transition_fair(g, g.node("f1"), 2.0),
                         doctest::Contains("not a career node"), std::runtime_error);
  }
}

TEST_CASE("fair kernel properties: normalization, parity at r=1, monotone in r") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    TinyHin t = fairhin::test::random_hin(rng, 20, 6, 3);
    HinGraph g = t.build();
    for (NodeId c : g.nodes_of_type("career")) {
      auto both = g.neighbors_by_type(c, g.protected_type());
      auto dis = g.neighbors_by_type_and_group(c, g.protected_type(), g.disadvantaged_group());
      if (both.empty()) {
        CHECK(transition_fair(g, c, 2.0).empty());
        continue;
      }
      double prev = -1.0;
      for (int r = 1; r <= 10; ++r) {
        auto d = transition_fair(g, c, r);
        double sum = 0.0;
        for (double p : d.prob) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        const double mass = group_mass(g, d, g.disadvantaged_group());
        if (dis.empty()) {
          CHECK(mass == 0.0);
        } else if (dis.size() == both.size()) {
          CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        } else {
          CHECK(mass == doctest::Approx(static_cast<double>(r) / (1 + r)).epsilon(1e-12));
          CHECK(mass > prev);
          prev = mass;
        }
      }
    }
  }
}

TEST_CASE("builtin meta-paths bind to the graph's relations") {
  HinGraph g = career_neighborhood().build();
  auto mps = builtin_metapaths(g);
  REQUIRE(mps.size() == 2);
  CHECK(mps[0].name == "cuiuc");
  CHECK(mps[0].start_type == "career");
  CHECK(mps[0].steps.size() == 4);  // 5 nodes
  CHECK(mps[0].steps.back().node_type == "career");
  CHECK(mps[1].name == "uiu");
  CHECK(mps[1].steps.size() == 2);  // 3 nodes
  for (const auto& s : mps[1].steps) CHECK(s.node_type != "career");
  for (const auto& mp : mps) validate_metapath(g, mp, 3);
}

TEST_CASE("forced trajectory on a path graph") {
  TinyHin t;
  t.nodes = {{"u1", "user", "F"}, {"u2", "user", "M"}, {"i1", "item", ""}};
  t.edges = {{"u1", "like", "i1"}, {"u2", "like", "i1"}};
  HinGraph g = t.build();
  MetaPath uiu{"uiu", "user", {{"like", "item"}, {"like", "user"}}};
  SamplerConfig cfg;
  cfg.num_walks_per_start = 3;
  cfg.walk_length = 1;
  cfg.seed = 9;
  auto walks = generate_walks(g, uiu, cfg);
  REQUIRE(walks.size() == 6);  // 2 starts x 3 walks
  for (const auto& w : walks) {
    REQUIRE(w.size() == 3);
    CHECK(g.original_id(w[1]) == "i1");
    CHECK(g.original_id(w[2]) != g.original_id(w[1]));
  }
}

TEST_CASE("walks validate edge-by-edge and type-by-type") {
  Rng rng(23);
  TinyHin t = fairhin::test::random_hin(rng, 25, 8, 3);
  HinGraph g = t.build();
  for (const MetaPath& mp : builtin_metapaths(g)) {
    SamplerConfig cfg;
    cfg.num_walks_per_start = 2;
    cfg.walk_length = 3;
    cfg.seed = 31;
    cfg.mode = SamplerConfig::Mode::fair;
    cfg.fair_ratio = 3.0;
    const std::size_t cycle = mp.steps.size();
    for (const Walk& w : generate_walks(g, mp, cfg)) {
      CHECK(g.type_name(g.node_type(w[0])) == mp.start_type);
      for (std::size_t i = 1; i < w.size(); ++i) {
        CHECK(g.type_name(g.node_type(w[i])) == mp.steps[(i - 1) % cycle].node_type);
        auto nbrs = g.neighbors_by_type(w[i - 1], g.node_type(w[i]));
        CHECK(std::find(nbrs.begin(), nbrs.end(), w[i]) != nbrs.end());
      }
    }
  }
}

TEST_CASE("same seed twice gives an identical corpus") {
  Rng rng(29);
  TinyHin t = fairhin::test::random_hin(rng, 30, 10, 3);
  HinGraph g = t.build();
  for (auto mode : {SamplerConfig::Mode::standard, SamplerConfig::Mode::fair}) {
    SamplerConfig cfg;
    cfg.num_walks_per_start = 4;
    cfg.walk_length = 5;
    cfg.fair_ratio = 2.0;
    cfg.seed = 77;
    cfg.mode = mode;
    const MetaPath mp = builtin_metapaths(g)[0];
    CHECK(generate_walks(g, mp, cfg) == generate_walks(g, mp, cfg));
  }
}

TEST_CASE("empirical single-step frequencies approach the fair kernel") {
  HinGraph g = career_neighborhood().build();
  const NodeId c = g.node("c0");
  auto analytic = transition_fair(g, c, 3.0);
  std::map<NodeId, double> freq;
  Rng rng(derive_seed(123, "mc"));
  const int n = 20000;
  for (int i = 0; i < n; ++i) ++freq[sample_from(analytic, rng.u01())];
  double tv = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    tv += std::abs(freq[analytic.nodes[i]] / n - analytic.prob[i]);
  CHECK(tv / 2 < 0.02);
}

TEST_CASE("meta-path validation errors") {
  HinGraph g = career_neighborhood().build();
  MetaPath bad_type{"x", "user", {{"like", "page"}}};
  CHECK_THROWS_WITH_AS(validate_metapath(g, bad_type, 1), doctest::Contains("unknown node type"),
                       std::runtime_error);
  MetaPath bad_rel{"x", "user", {{"follows", "item"}}};
  CHECK_THROWS_WITH_AS(validate_metapath(g, bad_rel, 1), doctest::Contains("does not connect"),
                       std::runtime_error);
  MetaPath not_cyclic{"x", "user", {{"like", "item"}}};
  CHECK_THROWS_AS(validate_metapath(g, not_cyclic, 2), std::runtime_error);
  validate_metapath(g, not_cyclic, 1);  // fine for a single pass
}
