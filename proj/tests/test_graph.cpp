#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "fairhin/graph.hpp"
#include "helpers.hpp"

using namespace fairhin;
using fairhin::test::TinyHin;

namespace {

TinyHin two_users_one_item() {
  TinyHin t;
  t.nodes = {{"u1", "user", "F"}, {"u2", "user", "M"}, {"i1", "item", ""}};
  t.edges = {{"u1", "like", "i1"}, {"u2", "like", "i1"}};
  return t;
}

}  // namespace

TEST_CASE("group-refined indexes invert the edge list") {
  HinGraph g = two_users_one_item().build();
  const NodeId item = g.node("i1");
  CHECK(g.neighbors_by_type(item, "user").size() == 2);
  // F sorts before M, so F is group 0
  CHECK(g.group_name(0) == "F");
  CHECK(g.neighbors_by_type_and_group(item, "user", 0).size() == 1);
  CHECK(g.original_id(g.neighbors_by_type_and_group(item, "user", 0)[0]) == "u1");
}

TEST_CASE("empty edge list still builds; all queries empty") {
  TinyHin t = two_users_one_item();
  t.edges.clear();
  HinGraph g = t.build();
  CHECK(g.num_edges() == 0);
  CHECK(g.neighbors_by_type(g.node("i1"), "user").empty());
  CHECK(g.neighbors_by_type(g.node("u1"), "item").empty());
}

TEST_CASE("star graph returns all typed leaves") {
  TinyHin t;
  t.nodes = {{"hub", "user", "F"}, {"x", "user", "M"}};
  for (int i = 0; i < 4; ++i) t.nodes.push_back({"i" + std::to_string(i), "item", ""});
  for (int i = 0; i < 4; ++i) t.edges.push_back({"hub", "like", "i" + std::to_string(i)});
  HinGraph g = t.build();
  CHECK(g.neighbors_by_type(g.node("hub"), "item").size() == 4);
  CHECK(g.neighbors_by_type(g.node("hub"), "user").empty());
}

TEST_CASE("neighbor queries match a brute-force edge scan") {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    TinyHin t = fairhin::test::random_hin(rng, 30, 12, 4);
    HinGraph g = t.build();
    for (const auto& n : t.nodes) {
      for (const std::string& type : {"user", "item", "career"}) {
        auto expect = fairhin::test::scan_neighbors(t, n.id, type);
        auto got = fairhin::test::ids_of(g, g.neighbors_by_type(g.node(n.id), type));
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
      }
    }
  }
}

TEST_CASE("group lists partition the type-refined list") {
  Rng rng(7);
  TinyHin t = fairhin::test::random_hin(rng, 40, 10, 3);
  HinGraph g = t.build();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto all = g.neighbors_by_type(v, g.protected_type());
    auto g0 = g.neighbors_by_type_and_group(v, g.protected_type(), 0);
    auto g1 = g.neighbors_by_type_and_group(v, g.protected_type(), 1);
    CHECK(g0.size() + g1.size() == all.size());
    std::set<NodeId> merged(g0.begin(), g0.end());
    merged.insert(g1.begin(), g1.end());
    CHECK(merged == std::set<NodeId>(all.begin(), all.end()));
  }
}

TEST_CASE("identical inputs produce identical graphs") {
  Rng rng(11);
  TinyHin t = fairhin::test::random_hin(rng, 25, 8, 3);
  HinGraph a = t.build();
  HinGraph b = t.build();
  REQUIRE(a.num_nodes() == b.num_nodes());
  for (NodeId v = 0; v < a.num_nodes(); ++v) {
    for (TypeId ty = 0; ty < a.num_types(); ++ty) {
      auto na = a.neighbors_by_type(v, ty);
      auto nb = b.neighbors_by_type(v, ty);
      CHECK(std::vector<NodeId>(na.begin(), na.end()) ==
            std::vector<NodeId>(nb.begin(), nb.end()));
    }
  }
}

TEST_CASE("advantaged group is the globally larger one") {
  TinyHin t;
  t.nodes = {{"u1", "user", "F"}, {"u2", "user", "M"},  {"u3", "user", "M"},
             {"i1", "item", ""},  {"c1", "career", ""}};
  t.edges = {{"u1", "like", "i1"}};
  HinGraph g = t.build();
  CHECK(g.group_name(g.advantaged_group()) == "M");
  CHECK(g.group_name(g.disadvantaged_group()) == "F");
  CHECK(g.group_size(g.advantaged_group()) == 2);
}

TEST_CASE("build errors") {
  TinyHin base = two_users_one_item();

  SUBCASE("duplicate node id") {
    TinyHin t = base;
    t.nodes.push_back({"u1", "user", "F"});
    CHECK_THROWS_WITH_AS(t.build(), doctest::Contains("duplicate node id"), std::runtime_error);
  }
  SUBCASE("missing group label") {
    TinyHin t = base;
    t.nodes[1].group = "";
    CHECK_THROWS_WITH_AS(t.build(), doctest::Contains("exactly two group labels"),
                         std::runtime_error);
  }
  SUBCASE("relation type mismatch") {
    TinyHin t = base;
    t.nodes.push_back({"c1", "career", ""});
    t.edges.push_back({"u1", "like", "c1"});  // like was declared user-item
    CHECK_THROWS_WITH_AS(t.build(), doctest::Contains("does not match relation types"),
                         std::runtime_error);
  }
  SUBCASE("unknown endpoint") {
    TinyHin t = base;
    t.edges.push_back({"u1", "like", "nope"});
    CHECK_THROWS_AS(t.build(), std::runtime_error);
  }
  SUBCASE("group query on a non-protected type") {
    HinGraph g = base.build();
    CHECK_THROWS_AS(g.neighbors_by_type_and_group(g.node("u1"), "item", 0), std::runtime_error);
  }
  SUBCASE("unknown node id") {
    HinGraph g = base.build();
    CHECK_THROWS_AS(g.node("ghost"), std::runtime_error);
  }
}

TEST_CASE("node and edge TSV round-trip") {
  Rng rng(3);
  TinyHin t = fairhin::test::random_hin(rng, 15, 6, 2);
  HinGraph g = t.build();
  const std::string nodes_path = "test_nodes.tsv";
  const std::string edges_path = "test_edges.tsv";
  write_node_tsv(nodes_path, g);
  write_edge_tsv(edges_path, g);
  HinGraph h = load_graph_tsv(nodes_path, edges_path, "gender");
  REQUIRE(h.num_nodes() == g.num_nodes());
  REQUIRE(h.num_edges() == g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    CHECK(h.original_id(v) == g.original_id(v));
    CHECK(h.group_of(v) == g.group_of(v));
  }
  std::remove(nodes_path.c_str());
  std::remove(edges_path.c_str());
}

TEST_CASE("malformed TSV reports the line number") {
  const std::string path = "test_bad.tsv";
  {
    std::ofstream out(path);
    out << "u1\tuser\tF\n";
    out << "u2\tuser\n";  // two fields only
  }
  CHECK_THROWS_WITH_AS(read_node_tsv(path), doctest::Contains(":2:"), std::runtime_error);
  std::remove(path.c_str());
}
