#include "fairhin/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "fairhin/nn_common.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

Eigen::MatrixXd embed_rows(const EmbeddingTable& emb, const std::vector<std::string>& ids) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), emb.dim);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& v = emb.at(ids[i]);
    for (int j = 0; j < emb.dim; ++j) out(static_cast<Eigen::Index>(i), j) = v[j];
  }
  return out;
}

}  // namespace

Eigen::MatrixXd mlp_probs(const MlpRanker& m, const Eigen::MatrixXd& U) {
  Eigen::MatrixXd Z1 = U * m.W1.transpose();
  Z1.rowwise() += m.b1.transpose();
  Eigen::MatrixXd H = Z1.array().tanh();
  Eigen::MatrixXd Q = H * m.W2.transpose();
  Q.rowwise() += m.b2.transpose();
  Eigen::MatrixXd logits = Q * m.careers.transpose();
  softmax_rows(logits);
  return logits;
}

MlpGradients mlp_loss_and_grad(const MlpRanker& m, const Eigen::MatrixXd& U,
                               const std::vector<int>& labels) {
  const Eigen::Index n = U.rows();
  if (static_cast<std::size_t>(n) != labels.size()) fail("mlp_loss_and_grad: labels misaligned");

  Eigen::MatrixXd Z1 = U * m.W1.transpose();
  Z1.rowwise() += m.b1.transpose();
  Eigen::MatrixXd H = Z1.array().tanh();
  Eigen::MatrixXd Q = H * m.W2.transpose();
  Q.rowwise() += m.b2.transpose();
  Eigen::MatrixXd P = Q * m.careers.transpose();
  softmax_rows(P);

  MlpGradients out;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    loss -= std::log(std::max(P(i, labels[i]), 1e-12));
  out.loss = loss / static_cast<double>(n);

  Eigen::MatrixXd dlogits = P;
  for (Eigen::Index i = 0; i < n; ++i) dlogits(i, labels[i]) -= 1.0;
  dlogits /= static_cast<double>(n);

  Eigen::MatrixXd dQ = dlogits * m.careers;             // n x d
  out.W2 = dQ.transpose() * H;                          // d x hidden
  out.b2 = dQ.colwise().sum().transpose();
  Eigen::MatrixXd dH = dQ * m.W2;                       // n x hidden
  Eigen::MatrixXd dZ1 = dH.cwiseProduct((1.0 - H.array().square()).matrix());
  out.W1 = dZ1.transpose() * U;                         // hidden x d
  out.b1 = dZ1.colwise().sum().transpose();
  return out;
}

MlpTrainResult train_mlp(const EmbeddingTable& emb,
                         const std::vector<std::pair<std::string, std::string>>& train_pairs,
                         const std::vector<std::pair<std::string, std::string>>& val_pairs,
                         const std::vector<std::string>& career_ids, const MlpConfig& cfg) {
  if (train_pairs.empty()) fail("train_mlp: no training pairs");
  if (career_ids.empty()) fail("train_mlp: no careers");

  MlpRanker m;
  m.emb_dim = emb.dim;
  m.hidden = cfg.hidden;
  m.career_ids = career_ids;
  std::sort(m.career_ids.begin(), m.career_ids.end());
  m.careers = embed_rows(emb, m.career_ids);

  std::unordered_map<std::string, int> career_index;
  for (std::size_t i = 0; i < m.career_ids.size(); ++i)
    career_index.emplace(m.career_ids[i], static_cast<int>(i));

  auto split = [&](const std::vector<std::pair<std::string, std::string>>& pairs,
                   Eigen::MatrixXd& U, std::vector<int>& labels) {
    std::vector<std::string> users;
    users.reserve(pairs.size());
    labels.clear();
    for (const auto& [user, career] : pairs) {
      auto it = career_index.find(career);
      if (it == career_index.end()) fail("train_mlp: pair career '" + career + "' not in list");
      users.push_back(user);
      labels.push_back(it->second);
    }
    U = embed_rows(emb, users);
  };
  Eigen::MatrixXd trainU, valU;
  std::vector<int> train_labels, val_labels;
  split(train_pairs, trainU, train_labels);
  split(val_pairs, valU, val_labels);

  Rng rng(derive_seed(cfg.seed, "mlp-init"));
  m.W1.resize(cfg.hidden, emb.dim);
  m.W2.resize(emb.dim, cfg.hidden);
  glorot_fill(m.W1, rng);
  glorot_fill(m.W2, rng);
  m.b1 = Eigen::VectorXd::Zero(cfg.hidden);
  m.b2 = Eigen::VectorXd::Zero(emb.dim);

  MlpTrainResult res;
  res.model = m;
  res.best_val_mrr = val_labels.empty() ? 0.0 : mrr_of_probs(mlp_probs(m, valU), val_labels);
  res.best_epoch = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    MlpGradients g = mlp_loss_and_grad(m, trainU, train_labels);
    if (!std::isfinite(g.loss)) break;
    m.W1 -= cfg.lr * g.W1;
    m.b1 -= cfg.lr * g.b1;
    m.W2 -= cfg.lr * g.W2;
    m.b2 -= cfg.lr * g.b2;
    res.epochs_run = epoch;

    if (val_labels.empty()) {
      res.model = m;
      continue;
    }
    const double mrr = mrr_of_probs(mlp_probs(m, valU), val_labels);
    if (mrr > res.best_val_mrr) {
      res.best_val_mrr = mrr;
      res.best_epoch = epoch;
      res.model = m;
    } else if (epoch - res.best_epoch >= cfg.patience) {
      break;
    }
  }
  return res;
}

std::vector<RankedCareer> predict_ranking(const MlpRanker& m, const EmbeddingTable& emb,
                                          const std::string& user) {
  if (!emb.contains(user)) fail("predict_ranking: unknown user '" + user + "'");
  Eigen::MatrixXd U = embed_rows(emb, {user});
  Eigen::MatrixXd P = mlp_probs(m, U);

  std::vector<int> order(m.num_careers());
  for (int i = 0; i < m.num_careers(); ++i) order[i] = i;
  // career_ids are sorted, so stable sort by probability keeps the id
  // tie-break implicit
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return P(0, a) > P(0, b); });

  std::vector<RankedCareer> out;
  out.reserve(order.size());
  for (int idx : order) out.push_back({m.career_ids[idx], P(0, idx)});
  return out;
}

void save_mlp_model(const std::string& path, const MlpRanker& m) {
  nlohmann::json header;
  header["version"] = 1;
  header["emb_dim"] = m.emb_dim;
  header["hidden"] = m.hidden;
  header["careers"] = m.career_ids;
  const std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail("save_mlp_model: cannot open '" + path + "'");
  out.write("FHML", 4);
  const std::uint32_t hlen = static_cast<std::uint32_t>(hs.size());
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(hs.data(), hs.size());
  auto write_mat = [&](const Eigen::MatrixXd& w) {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double x = w(i, j);
        out.write(reinterpret_cast<const char*>(&x), sizeof x);
      }
  };
  write_mat(m.careers);
  write_mat(m.W1);
  write_mat(m.b1);
  write_mat(m.W2);
  write_mat(m.b2);
  if (!out) fail("save_mlp_model: write failed for '" + path + "'");
}

MlpRanker load_mlp_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("load_mlp_model: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "FHML") fail("load_mlp_model: bad magic in '" + path + "'");
  std::uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 4);
  std::string hs(hlen, '\0');
  in.read(hs.data(), hlen);
  if (!in) fail("load_mlp_model: truncated header in '" + path + "'");
  nlohmann::json header = nlohmann::json::parse(hs);
  if (header.at("version").get<int>() != 1) fail("load_mlp_model: unsupported version");

  MlpRanker m;
  m.emb_dim = header.at("emb_dim").get<int>();
  m.hidden = header.at("hidden").get<int>();
  m.career_ids = header.at("careers").get<std::vector<std::string>>();
  auto read_mat = [&](Eigen::MatrixXd& w, Eigen::Index rows, Eigen::Index cols) {
    w.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        double x;
        in.read(reinterpret_cast<char*>(&x), sizeof x);
        w(i, j) = x;
      }
  };
  Eigen::MatrixXd b;
  read_mat(m.careers, static_cast<Eigen::Index>(m.career_ids.size()), m.emb_dim);
  read_mat(m.W1, m.hidden, m.emb_dim);
  read_mat(b, m.hidden, 1);
  m.b1 = b.col(0);
  read_mat(m.W2, m.emb_dim, m.hidden);
  read_mat(b, m.emb_dim, 1);
  m.b2 = b.col(0);
  if (!in) fail("load_mlp_model: truncated payload in '" + path + "'");
  return m;
}

}  // namespace fairhin
