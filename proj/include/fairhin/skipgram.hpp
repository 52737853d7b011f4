#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairhin/embedding.hpp"

namespace fairhin {

struct SkipGramConfig {
  int dim = 128;
  int negatives = 5;
  int window = 5;
  int epochs = 5;
  double alpha0 = 0.025;      // initial learning rate
  double alpha_floor = 1e-4;  // linear decay endpoint
  std::uint64_t seed = 0;
};

// Occurrence counts plus the per-type unigram^0.75 negative-sampling
// distributions. Vocabulary is the lexicographically sorted token set, which
// makes training invariant to walk-file line order.
struct FrequencyTable {
  std::vector<std::string> vocab;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::int64_t> count;
  std::int64_t total_tokens = 0;

  std::vector<std::string> type_names;       // "" when no type map was given
  std::vector<int> vocab_type;               // type index per vocab entry
  std::vector<std::vector<std::size_t>> type_members;
  std::vector<std::vector<double>> type_cdf;  // cumulative count^0.75 weights
};

// node_types maps token -> type name; nullptr buckets everything together.
// Errors: empty corpus; a corpus token missing from node_types.
FrequencyTable build_frequency_table(
    const std::vector<std::vector<std::string>>& corpus,
    const std::unordered_map<std::string, std::string>* node_types = nullptr);

// One (center, context, negatives) tuple of the negative-sampling objective:
//   L = -log s(v.c) - sum_n log s(-v.n).
// The trainer applies gradients from the same routines the finite-difference
// checks call.
double sgns_pair_loss(const double* center, const double* ctx, const double* const* negs,
                      int k, int dim);
void sgns_pair_grad(const double* center, const double* ctx, const double* const* negs, int k,
                    int dim, double* g_center, double* g_ctx, double* const* g_negs);

double sgns_pair_loss(const std::vector<double>& center, const std::vector<double>& ctx,
                      const std::vector<std::vector<double>>& negs);
void sgns_pair_grad(const std::vector<double>& center, const std::vector<double>& ctx,
                    const std::vector<std::vector<double>>& negs, std::vector<double>& g_center,
                    std::vector<double>& g_ctx, std::vector<std::vector<double>>& g_negs);

// Skip-gram with negative sampling over a walk corpus. Negatives are drawn
// from the unigram^0.75 distribution of the context's node type. Deterministic
// given cfg.seed and invariant to corpus line order.
EmbeddingTable train_skipgram(
    const std::vector<std::vector<std::string>>& corpus, const SkipGramConfig& cfg,
    const std::unordered_map<std::string, std::string>* node_types = nullptr);

}  // namespace fairhin
