#include "fairhin/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fairhin/rng.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

FrequencyTable build_frequency_table(
    const std::vector<std::vector<std::string>>& corpus,
    const std::unordered_map<std::string, std::string>* node_types) {
  if (corpus.empty()) fail("build_frequency_table: empty corpus");

  std::map<std::string, std::int64_t> counts;  // ordered -> canonical vocab
  std::int64_t total = 0;
  for (const auto& walk : corpus) {
    for (const auto& tok : walk) {
      ++counts[tok];
      ++total;
    }
  }
  if (total == 0) fail("build_frequency_table: empty corpus");

  FrequencyTable ft;
  ft.total_tokens = total;
  ft.vocab.reserve(counts.size());
  ft.count.reserve(counts.size());
  for (auto& [tok, c] : counts) {
    ft.index.emplace(tok, ft.vocab.size());
    ft.vocab.push_back(tok);
    ft.count.push_back(c);
  }

  std::map<std::string, int> type_ids;
  ft.vocab_type.resize(ft.vocab.size());
  for (std::size_t i = 0; i < ft.vocab.size(); ++i) {
    std::string type;
    if (node_types) {
      auto it = node_types->find(ft.vocab[i]);
      if (it == node_types->end())
        fail("build_frequency_table: corpus node '" + ft.vocab[i] + "' absent from the node table");
      type = it->second;
    }
    auto [it, inserted] = type_ids.emplace(type, static_cast<int>(type_ids.size()));
    ft.vocab_type[i] = it->second;
    (void)inserted;
  }
  ft.type_names.resize(type_ids.size());
  for (auto& [name, id] : type_ids) ft.type_names[id] = name;

  ft.type_members.resize(ft.type_names.size());
  ft.type_cdf.resize(ft.type_names.size());
  for (std::size_t i = 0; i < ft.vocab.size(); ++i)
    ft.type_members[ft.vocab_type[i]].push_back(i);
  for (std::size_t t = 0; t < ft.type_members.size(); ++t) {
    double cum = 0.0;
    ft.type_cdf[t].reserve(ft.type_members[t].size());
    for (std::size_t m : ft.type_members[t]) {
      cum += std::pow(static_cast<double>(ft.count[m]), 0.75);
      ft.type_cdf[t].push_back(cum);
    }
  }
  return ft;
}

double sgns_pair_loss(const double* center, const double* ctx, const double* const* negs,
                      int k, int dim) {
  double loss = -std::log(sigmoid(dot(center, ctx, dim)));
  for (int n = 0; n < k; ++n) loss -= std::log(sigmoid(-dot(center, negs[n], dim)));
  return loss;
}

void sgns_pair_grad(const double* center, const double* ctx, const double* const* negs, int k,
                    int dim, double* g_center, double* g_ctx, double* const* g_negs) {
  std::fill(g_center, g_center + dim, 0.0);
  const double gp = sigmoid(dot(center, ctx, dim)) - 1.0;  // d loss / d (v.c)
  for (int i = 0; i < dim; ++i) g_ctx[i] = gp * center[i];
  axpy(gp, ctx, g_center, dim);
  for (int n = 0; n < k; ++n) {
    const double gn = sigmoid(dot(center, negs[n], dim));
    for (int i = 0; i < dim; ++i) g_negs[n][i] = gn * center[i];
    axpy(gn, negs[n], g_center, dim);
  }
}

double sgns_pair_loss(const std::vector<double>& center, const std::vector<double>& ctx,
                      const std::vector<std::vector<double>>& negs) {
  std::vector<const double*> np(negs.size());
  for (std::size_t i = 0; i < negs.size(); ++i) np[i] = negs[i].data();
  return sgns_pair_loss(center.data(), ctx.data(), np.data(), static_cast<int>(negs.size()),
                        static_cast<int>(center.size()));
}

void sgns_pair_grad(const std::vector<double>& center, const std::vector<double>& ctx,
                    const std::vector<std::vector<double>>& negs, std::vector<double>& g_center,
                    std::vector<double>& g_ctx, std::vector<std::vector<double>>& g_negs) {
  const int dim = static_cast<int>(center.size());
  g_center.assign(dim, 0.0);
  g_ctx.assign(dim, 0.0);
  g_negs.assign(negs.size(), std::vector<double>(dim, 0.0));
  std::vector<const double*> np(negs.size());
  std::vector<double*> gp(negs.size());
  for (std::size_t i = 0; i < negs.size(); ++i) {
    np[i] = negs[i].data();
    gp[i] = g_negs[i].data();
  }
  sgns_pair_grad(center.data(), ctx.data(), np.data(), static_cast<int>(negs.size()), dim,
                 g_center.data(), g_ctx.data(), gp.data());
}

EmbeddingTable train_skipgram(const std::vector<std::vector<std::string>>& corpus,
                              const SkipGramConfig& cfg,
                              const std::unordered_map<std::string, std::string>* node_types) {
  if (cfg.dim <= 0 || cfg.negatives < 1 || cfg.window < 1 || cfg.epochs < 1)
    fail("train_skipgram: invalid config (need dim>0, negatives>=1, window>=1, epochs>=1)");

  FrequencyTable ft = build_frequency_table(corpus, node_types);
  const int dim = cfg.dim;
  const std::size_t vocab_size = ft.vocab.size();

  // Index the walks and put them in canonical (sorted) order so that training
  // does not depend on the line order of the walk file.
  std::vector<std::vector<std::size_t>> walks;
  walks.reserve(corpus.size());
  for (const auto& w : corpus) {
    std::vector<std::size_t> iw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) iw[i] = ft.index.at(w[i]);
    walks.push_back(std::move(iw));
  }
  std::sort(walks.begin(), walks.end());

  // Center vectors uniform in [-0.5/d, 0.5/d], context vectors zero.
  std::vector<std::vector<double>> syn0(vocab_size, std::vector<double>(dim));
  std::vector<std::vector<double>> syn1(vocab_size, std::vector<double>(dim, 0.0));
  {
    Rng init(derive_seed(cfg.seed, "sgns-init"));
    const double half = 0.5 / dim;
    for (auto& row : syn0)
      for (double& x : row) x = init.uniform(-half, half);
  }

  // Total (center, context) pairs across all epochs, for the linear schedule.
  std::int64_t pairs_per_epoch = 0;
  for (const auto& w : walks) {
    const std::int64_t L = static_cast<std::int64_t>(w.size());
    for (std::int64_t i = 0; i < L; ++i) {
      std::int64_t lo = std::max<std::int64_t>(0, i - cfg.window);
      std::int64_t hi = std::min<std::int64_t>(L - 1, i + cfg.window);
      pairs_per_epoch += hi - lo;  // excludes j == i
    }
  }
  const std::int64_t total_pairs = pairs_per_epoch * cfg.epochs;
  if (total_pairs == 0) fail("train_skipgram: corpus has no context pairs");

  Rng rng(derive_seed(cfg.seed, "sgns-train"));
  std::vector<double> g_center(dim);
  std::vector<double> g_ctx(dim);
  std::vector<std::vector<double>> g_negs(cfg.negatives, std::vector<double>(dim));
  std::vector<const double*> neg_ptr(cfg.negatives);
  std::vector<double*> g_neg_ptr(cfg.negatives);
  std::vector<std::size_t> neg_idx(cfg.negatives);

  std::int64_t done = 0;
  std::vector<std::size_t> order(walks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(cfg.seed, "sgns-shuffle", {static_cast<std::uint64_t>(epoch)}));
    shuffle_rng.shuffle(order);
    for (std::size_t wi : order) {
      const auto& walk = walks[wi];
      const std::int64_t L = static_cast<std::int64_t>(walk.size());
      for (std::int64_t i = 0; i < L; ++i) {
        const std::size_t center = walk[i];
        std::int64_t lo = std::max<std::int64_t>(0, i - cfg.window);
        std::int64_t hi = std::min<std::int64_t>(L - 1, i + cfg.window);
        for (std::int64_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const std::size_t ctx = walk[j];
          const double frac = static_cast<double>(done) / static_cast<double>(total_pairs);
          const double alpha = cfg.alpha0 + (cfg.alpha_floor - cfg.alpha0) * frac;
          ++done;

          // Negatives from the context's type bucket; draws that hit the true
          // context are skipped.
          const int t = ft.vocab_type[ctx];
          const auto& cdf = ft.type_cdf[t];
          const auto& members = ft.type_members[t];
          int k = 0;
          for (int n = 0; n < cfg.negatives; ++n) {
            const double u = rng.u01() * cdf.back();
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t pick = members[std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1)];
            if (pick == ctx) continue;
            neg_idx[k] = pick;
            neg_ptr[k] = syn1[pick].data();
            g_neg_ptr[k] = g_negs[k].data();
            ++k;
          }

          double* v = syn0[center].data();
          double* c = syn1[ctx].data();
          sgns_pair_grad(v, c, neg_ptr.data(), k, dim, g_center.data(), g_ctx.data(),
                         g_neg_ptr.data());
          if (!std::isfinite(g_center[0]) || !std::isfinite(g_ctx[0]))
            fail("train_skipgram: non-finite gradient at update " + std::to_string(done) +
                 " (center '" + ft.vocab[center] + "', context '" + ft.vocab[ctx] +
                 "', loss=" + std::to_string(sgns_pair_loss(v, c, neg_ptr.data(), k, dim)) + ")");
          axpy(-alpha, g_center.data(), v, dim);
          axpy(-alpha, g_ctx.data(), c, dim);
          for (int n = 0; n < k; ++n) axpy(-alpha, g_negs[n].data(), syn1[neg_idx[n]].data(), dim);
        }
      }
    }
  }

  EmbeddingTable table;
  table.dim = dim;
  table.ids = ft.vocab;
  table.index = ft.index;
  table.vec = std::move(syn0);
  table.ctx = std::move(syn1);
  return table;
}

}  // namespace fairhin
