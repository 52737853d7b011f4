#include "fairhin/projection.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

constexpr double kZeroNorm = 1e-12;

}  // namespace

std::vector<double> group_direction(const EmbeddingTable& emb,
                                    std::span<const std::string> members) {
  if (members.empty()) fail("group_direction: empty member list");
  std::vector<double> sum(emb.dim, 0.0);
  for (const std::string& id : members) {
    const auto& e = emb.at(id);
    for (int i = 0; i < emb.dim; ++i) sum[i] += e[i];
  }
  const double n = norm2(sum);
  if (n < kZeroNorm) fail("group_direction: member vectors sum to zero norm");
  for (double& x : sum) x /= n;
  return sum;
}

BiasDirection bias_direction(const std::vector<double>& g0, const std::vector<double>& g1) {
  if (g0.size() != g1.size()) fail("bias_direction: dimension mismatch");
  std::vector<double> d(g0.size());
  for (std::size_t i = 0; i < g0.size(); ++i) d[i] = g0[i] - g1[i];
  const double n = norm2(d);
  if (n < kZeroNorm)
    fail("bias_direction: group directions coincide (nothing to remove)");
  for (double& x : d) x /= n;
  return BiasDirection{std::move(d)};
}

std::vector<double> debias(const std::vector<double>& e, const BiasDirection& vb) {
  if (e.size() != vb.v.size()) fail("debias: dimension mismatch");
  double proj = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) proj += e[i] * vb.v[i];
  std::vector<double> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i] - proj * vb.v[i];
  return out;
}

DebiasOutcome debias_all(EmbeddingTable& emb, std::span<const std::string> fit_g0,
                         std::span<const std::string> fit_g1,
                         std::span<const std::string> apply_users) {
  std::vector<std::string> g0, g1;
  for (const auto& id : fit_g0)
    if (emb.contains(id)) g0.push_back(id);
  for (const auto& id : fit_g1)
    if (emb.contains(id)) g1.push_back(id);
  if (g0.empty() || g1.empty())
    fail("debias_all: a fit group has no members in the embedding table");

  DebiasOutcome out;
  try {
    out.direction = bias_direction(group_direction(emb, g0), group_direction(emb, g1));
  } catch (const std::runtime_error& e) {
    std::cerr << "debias_all: " << e.what() << "; leaving embeddings unchanged\n";
    return out;
  }
  for (const std::string& id : apply_users) {
    auto it = emb.index.find(id);
    if (it == emb.index.end()) continue;  // user never appeared in the corpus
    emb.vec[it->second] = debias(emb.vec[it->second], out.direction);
    ++out.users_projected;
  }
  out.applied = true;
  return out;
}

}  // namespace fairhin
