#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fairhin/embedding.hpp"

namespace fairhin {

struct MlpConfig {
  int hidden = 128;
  double lr = 0.05;
  int epochs = 200;
  int patience = 20;
  std::uint64_t seed = 0;
};

// Career ranker: a one-hidden-layer map turns the user embedding into a
// query vector, careers are scored by inner product with their (frozen)
// embeddings and ranked by softmax probability.
struct MlpRanker {
  int emb_dim = 0;
  int hidden = 0;
  std::vector<std::string> career_ids;  // lexicographic; ties break by this order
  Eigen::MatrixXd careers;              // num_careers x emb_dim, frozen inputs
  Eigen::MatrixXd W1;                   // hidden x emb_dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd W2;                   // emb_dim x hidden
  Eigen::VectorXd b2;

  int num_careers() const { return static_cast<int>(career_ids.size()); }
};

// Probability rows for a batch of user embeddings (rows of U).
Eigen::MatrixXd mlp_probs(const MlpRanker& m, const Eigen::MatrixXd& U);

struct MlpGradients {
  double loss = 0.0;
  Eigen::MatrixXd W1, W2;
  Eigen::VectorXd b1, b2;
};

// Cross-entropy over the ranker's softmax with manual backprop; shared by
// the trainer and the finite-difference checks.
MlpGradients mlp_loss_and_grad(const MlpRanker& m, const Eigen::MatrixXd& U,
                               const std::vector<int>& labels);

struct MlpTrainResult {
  MlpRanker model;
  double best_val_mrr = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
};

// Gradient descent on (user, career) training pairs with early stopping on
// validation MRR. Every train/val user and every career must have an
// embedding. Deterministic per cfg.seed.
MlpTrainResult train_mlp(const EmbeddingTable& emb,
                         const std::vector<std::pair<std::string, std::string>>& train_pairs,
                         const std::vector<std::pair<std::string, std::string>>& val_pairs,
                         const std::vector<std::string>& career_ids, const MlpConfig& cfg);

struct RankedCareer {
  std::string career;
  double prob;
};

/// Careers sorted by descending probability, ties by ascending career id.
std::vector<RankedCareer> predict_ranking(const MlpRanker& m, const EmbeddingTable& emb,
                                          const std::string& user);

void save_mlp_model(const std::string& path, const MlpRanker& m);
MlpRanker load_mlp_model(const std::string& path);

}  // namespace fairhin
