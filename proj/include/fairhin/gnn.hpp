#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fairhin/features.hpp"
#include "fairhin/graph.hpp"

namespace fairhin {

enum class Activation { tanh, relu };

struct FairLossConfig {
  enum class Mode { none, dp, eo };
  Mode mode = Mode::none;
  double lambda = 0.0;  // lambda_dp or lambda_eo depending on mode
};

struct GnnConfig {
  int hidden = 128;
  Activation act = Activation::relu;
  double lr = 0.05;
  int epochs = 300;
  int patience = 30;  // early stop on validation MRR
  std::uint64_t seed = 0;
};

// Two mean-aggregation layers; each layer applies an affine map to
// [self || aggregated] followed by the nonlinearity, then a linear map to
// class logits and a softmax. Classes are careers in lexicographic id order.
struct GnnModel {
  int in_dim = 0;
  int hidden = 0;
  Activation act = Activation::tanh;
  std::vector<std::string> class_ids;
  Eigen::MatrixXd W1;  // hidden x 2*in_dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd W2;  // hidden x 2*hidden
  Eigen::VectorXd b2;
  Eigen::MatrixXd Wo;  // classes x hidden
  Eigen::VectorXd bo;

  int num_classes() const { return static_cast<int>(class_ids.size()); }
};

GnnModel init_gnn_model(int in_dim, int hidden, std::vector<std::string> class_ids,
                        Activation act, std::uint64_t seed);

// Row per requested user, probabilities over class_ids; rows sum to 1.
// Aggregation runs over feature-covered neighbors only, so career nodes and
// choose edges never leak into the representation.
Eigen::MatrixXd gnn_forward(const GnnModel& m, const HinGraph& g, const FeatureMatrix& X,
                            const std::vector<NodeId>& users);

/// Negative mean log-probability of the true class (probabilities clamped at
/// 1e-12 inside the log).
double loss_acc(const Eigen::MatrixXd& probs, const std::vector<int>& labels);

/// sum_k (mean_{g0} P(y=k|x) - mean_{g1} P(y=k|x))^2; needs both groups.
double loss_dp(const Eigen::MatrixXd& probs, const std::vector<std::uint8_t>& groups);

// Equal-opportunity penalty; per class the means run over ground-truth
// members of that class in each group. Classes missing from either group are
// skipped (count reported via skipped).
double loss_eo(const Eigen::MatrixXd& probs, const std::vector<std::uint8_t>& groups,
               const std::vector<int>& labels, int* skipped = nullptr);

struct GnnBatch {
  std::vector<NodeId> users;
  std::vector<int> labels;              // class index per user
  std::vector<std::uint8_t> groups;     // group per user
};

struct GnnGradients {
  double loss = 0.0;
  double acc_part = 0.0;
  double fair_part = 0.0;
  Eigen::MatrixXd W1, W2, Wo;
  Eigen::VectorXd b1, b2, bo;
};

// Full-batch loss L_acc + lambda * L_fair and its analytic parameter
// gradients via manual backprop. The finite-difference checks call this
// same routine.
GnnGradients gnn_loss_and_grad(const GnnModel& m, const HinGraph& g, const FeatureMatrix& X,
                               const GnnBatch& batch, const FairLossConfig& fair);

struct GnnTrainResult {
  GnnModel model;       // best validation checkpoint
  double best_val_mrr = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
  bool diverged = false;
};

// Full-batch gradient descent with early stopping on validation MRR.
// Labels in the batches index into class_ids. Deterministic per cfg.seed.
// On divergence returns the last finite checkpoint with diverged set.
GnnTrainResult train_gnn(const HinGraph& g, const FeatureMatrix& X,
                         std::vector<std::string> class_ids, const GnnBatch& train,
                         const GnnBatch& val, const FairLossConfig& fair, const GnnConfig& cfg);

// Versioned binary: magic, JSON header (shapes, activation, classes), then
// the row-major double payload.
void save_gnn_model(const std::string& path, const GnnModel& m);
GnnModel load_gnn_model(const std::string& path);

}  // namespace fairhin
