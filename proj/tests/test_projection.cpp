#include <doctest.h>

#include <cmath>

#include "fairhin/projection.hpp"
#include "fairhin/rng.hpp"
#include "helpers.hpp"

using namespace fairhin;

namespace {

EmbeddingTable table_of(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  EmbeddingTable t;
  t.dim = static_cast<int>(rows.front().second.size());
  for (const auto& [id, v] : rows) {
    t.index.emplace(id, t.ids.size());
    t.ids.push_back(id);
    t.vec.push_back(v);
  }
  return t;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

TEST_CASE("group direction hand values") {
  EmbeddingTable t = table_of({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {-1, 0}}});
  const std::vector<std::string> single{"a"};
  CHECK(group_direction(t, single) == std::vector<double>{1, 0});

  const std::vector<std::string> two{"a", "b"};
  auto d = group_direction(t, two);
  CHECK(d[0] == doctest::Approx(1 / std::sqrt(2)).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(1 / std::sqrt(2)).epsilon(1e-12));

  const std::vector<std::string> cancel{"a", "c"};
  CHECK_THROWS_WITH_AS(group_direction(t, cancel), doctest::Contains("zero norm"),
                       std::runtime_error);
  CHECK_THROWS_AS(group_direction(t, std::vector<std::string>{}), std::runtime_error);
  CHECK_THROWS_AS(group_direction(t, std::vector<std::string>{"ghost"}), std::runtime_error);
}

TEST_CASE("bias direction hand values") {
  auto vb = bias_direction({1, 0}, {0, 1});
  CHECK(vb.v[0] == doctest::Approx(1 / std::sqrt(2)).epsilon(1e-12));
  CHECK(vb.v[1] == doctest::Approx(-1 / std::sqrt(2)).epsilon(1e-12));

  CHECK_THROWS_AS(bias_direction({1, 0}, {1, 0}), std::runtime_error);

  auto anti = bias_direction({1, 0}, {-1, 0});
  CHECK(anti.v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(anti.v[1] == 0.0);
}

TEST_CASE("debias hand values") {
  BiasDirection vb{{1, 0}};
  CHECK(debias({0, 1}, vb) == std::vector<double>{0, 1});  // orthogonal: unchanged
  auto zero = debias({1, 0}, vb);                          // parallel: removed
  CHECK(zero[0] == doctest::Approx(0.0));
  CHECK(zero[1] == 0.0);
  auto mixed = debias({1, 1}, vb);
  CHECK(mixed[0] == doctest::Approx(0.0));
  CHECK(mixed[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(debias({1, 2, 3}, vb), std::runtime_error);
}

TEST_CASE("projection is idempotent, linear, norm non-increasing") {
  Rng rng(5);
  const int dim = 16;
  std::vector<double> raw(dim);
  for (auto& x : raw) x = rng.uniform(-1, 1);
  BiasDirection vb{raw};
  const double n = norm(vb.v);
  for (auto& x : vb.v) x /= n;

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(dim), y(dim);
    for (auto& v : x) v = rng.uniform(-2, 2);
    for (auto& v : y) v = rng.uniform(-2, 2);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);

    auto px = debias(x, vb);
    auto ppx = debias(px, vb);
    for (int i = 0; i < dim; ++i) CHECK(std::abs(ppx[i] - px[i]) <= 1e-9);

    std::vector<double> comb(dim);
    for (int i = 0; i < dim; ++i) comb[i] = a * x[i] + b * y[i];
    auto pcomb = debias(comb, vb);
    auto py = debias(y, vb);
    for (int i = 0; i < dim; ++i)
      CHECK(std::abs(pcomb[i] - (a * px[i] + b * py[i])) <= 1e-9);

    CHECK(norm(px) <= norm(x) + 1e-12);

    // components orthogonal to the direction survive exactly
    std::vector<double> orth(dim);
    for (auto& v : orth) v = rng.uniform(-1, 1);
    const double c = dot(orth, vb.v);
    for (int i = 0; i < dim; ++i) orth[i] -= c * vb.v[i];
    auto porth = debias(orth, vb);
    for (int i = 0; i < dim; ++i) CHECK(std::abs(porth[i] - orth[i]) <= 1e-12);
  }
}

TEST_CASE("debias_all removes the group component") {
  Rng rng(9);
  const int dim = 12;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::vector<std::string> g0, g1, users;
  for (int u = 0; u < 60; ++u) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-1, 1);
    const std::string id = "u" + std::to_string(u);
    if (u % 2 == 0) {
      v[0] += 2.0;  != 0 planted offset
      g0.push_back(id);
    } else {
      g1.push_back(id);
    }
    users.push_back(id);
    rows.emplace_back(id, std::move(v));
  }
  EmbeddingTable t = table_of(rows);
  DebiasOutcome out = debias_all(t, g0, g1, users);
  REQUIRE(out.applied);
  CHECK(out.users_projected == 60);

  for (const auto& id : users)
    CHECK(std::abs(dot(t.at(id), out.direction.v)) <= 1e-9);

  // applying a second time changes nothing beyond tolerance
  EmbeddingTable twice = t;
  debias_all(twice, g0, g1, users);
  for (const auto& id : users) {
    const auto& a = t.at(id);
    const auto& b = twice.at(id);
    for (int i = 0; i < dim; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }
}

TEST_CASE("planted offset collapses the group means along the planted axis") {
  Rng rng(13);
  const int dim = 10;
  const double mu = 1.5;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::vector<std::string> g0, g1, users;
  for (int u = 0; u < 200; ++u) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-0.5, 0.5);
    const std::string id = "u" + std::to_string(u);
    if (u % 2 == 0) {
      v[3] += mu;  // planted direction = axis 3
      g0.push_back(id);
    } else {
      g1.push_back(id);
    }
    users.push_back(id);
    rows.emplace_back(id, std::move(v));
  }
  EmbeddingTable t = table_of(rows);
  debias_all(t, g0, g1, users);

  double mean0 = 0, mean1 = 0;
  for (const auto& id : g0) mean0 += t.at(id)[3];
  for (const auto& id : g1) mean1 += t.at(id)[3];
  mean0 /= g0.size();
  mean1 /= g1.size();
  CHECK(std::abs(mean0 - mean1) <= 1e-6);
}

TEST_CASE("identical group directions leave the table unchanged") {
  EmbeddingTable t = table_of({{"a", {1, 1}}, {"b", {1, 1}}, {"c", {2, 0}}});
  const std::vector<std::string> g0{"a"}, g1{"b"}, users{"a", "b", "c"};
  DebiasOutcome out = debias_all(t, g0, g1, users);
  CHECK_FALSE(out.applied);
  CHECK(t.at("c") == std::vector<double>{2, 0});
}
