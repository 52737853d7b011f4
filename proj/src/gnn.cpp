#include "fairhin/gnn.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "fairhin/nn_common.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr double kProbFloor = 1e-12;

// Feature-covered neighbor lists; the only adjacency the GNN sees.
struct AggIndex {
  std::vector<std::vector<NodeId>> nbrs;

  static AggIndex build(const HinGraph& g, const FeatureMatrix& X) {
    AggIndex idx;
    idx.nbrs.resize(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      for (TypeId t = 0; t < g.num_types(); ++t) {
        for (NodeId u : g.neighbors_by_type(v, t))
          if (X.covered[u]) idx.nbrs[v].push_back(u);
      }
    }
    return idx;
  }
};

Eigen::MatrixXd aggregate(const AggIndex& idx, const Eigen::MatrixXd& h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (std::size_t v = 0; v < idx.nbrs.size(); ++v) {
    const auto& nb = idx.nbrs[v];
    if (nb.empty()) continue;
    for (NodeId u : nb) out.row(v) += h.row(u);
    out.row(v) /= static_cast<double>(nb.size());
  }
  return out;
}

// Adjoint of `aggregate`: routes dL/d(agg) back to the aggregated rows.
Eigen::MatrixXd aggregate_adjoint(const AggIndex& idx, const Eigen::MatrixXd& d_agg) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d_agg.rows(), d_agg.cols());
  for (std::size_t v = 0; v < idx.nbrs.size(); ++v) {
    const auto& nb = idx.nbrs[v];
    if (nb.empty()) continue;
    const double inv = 1.0 / static_cast<double>(nb.size());
    for (NodeId u : nb) out.row(u) += inv * d_agg.row(v);
  }
  return out;
}

Eigen::MatrixXd activate(Activation act, const Eigen::MatrixXd& z) {
  if (act == Activation::tanh) return z.array().tanh();
  return z.cwiseMax(0.0);
}

// Derivative expressed through z and h = act(z).
Eigen::MatrixXd activate_grad(Activation act, const Eigen::MatrixXd& z,
                              const Eigen::MatrixXd& h) {
  if (act == Activation::tanh) return (1.0 - h.array().square()).matrix();
  return (z.array() > 0.0).cast<double>().matrix();
}

struct ForwardCache {
  Eigen::MatrixXd A0, Z1, H1, A1, Z2, H2;
};

ForwardCache forward_all(const GnnModel& m, const FeatureMatrix& X, const AggIndex& idx) {
  const int f = m.in_dim;
  const int h = m.hidden;
  ForwardCache c;
  c.A0 = aggregate(idx, X.rows);
  c.Z1 = X.rows * m.W1.leftCols(f).transpose() + c.A0 * m.W1.rightCols(f).transpose();
  c.Z1.rowwise() += m.b1.transpose();
  c.H1 = activate(m.act, c.Z1);
  c.A1 = aggregate(idx, c.H1);
  c.Z2 = c.H1 * m.W2.leftCols(h).transpose() + c.A1 * m.W2.rightCols(h).transpose();
  c.Z2.rowwise() += m.b2.transpose();
  c.H2 = activate(m.act, c.Z2);
  return c;
}

Eigen::MatrixXd user_probs(const GnnModel& m, const ForwardCache& c,
                           const std::vector<NodeId>& users) {
  Eigen::MatrixXd logits(static_cast<Eigen::Index>(users.size()), m.num_classes());
  for (std::size_t i = 0; i < users.size(); ++i)
    logits.row(static_cast<Eigen::Index>(i)) =
        c.H2.row(users[i]) * m.Wo.transpose() + m.bo.transpose();
  softmax_rows(logits);
  return logits;
}

// dL_fair/dP for the active penalty (without the lambda factor).
Eigen::MatrixXd fair_dprobs(FairLossConfig::Mode mode, const Eigen::MatrixXd& probs,
                            const std::vector<std::uint8_t>& groups,
                            const std::vector<int>& labels) {
  const Eigen::Index mrows = probs.rows();
  const Eigen::Index K = probs.cols();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(mrows, K);
  if (mode == FairLossConfig::Mode::dp) {
    double n0 = 0, n1 = 0;
    Eigen::RowVectorXd s0 = Eigen::RowVectorXd::Zero(K), s1 = Eigen::RowVectorXd::Zero(K);
    for (Eigen::Index i = 0; i < mrows; ++i) {
      if (groups[i] == 0) {
        s0 += probs.row(i);
        ++n0;
      } else {
        s1 += probs.row(i);
        ++n1;
      }
    }
    const Eigen::RowVectorXd diff = s0 / n0 - s1 / n1;
    for (Eigen::Index i = 0; i < mrows; ++i)
      d.row(i) = (groups[i] == 0 ? 2.0 / n0 : -2.0 / n1) * diff;
  } else if (mode == FairLossConfig::Mode::eo) {
    for (Eigen::Index k = 0; k < K; ++k) {
      double c0 = 0, c1 = 0, s0 = 0, s1 = 0;
      for (Eigen::Index i = 0; i < mrows; ++i) {
        if (labels[i] != k) continue;
        if (groups[i] == 0) {
          ++c0;
          s0 += probs(i, k);
        } else {
          ++c1;
          s1 += probs(i, k);
        }
      }
      if (c0 == 0 || c1 == 0) continue;
      const double diff = s0 / c0 - s1 / c1;
      for (Eigen::Index i = 0; i < mrows; ++i) {
        if (labels[i] != k) continue;
        d(i, k) += groups[i] == 0 ? 2.0 * diff / c0 : -2.0 * diff / c1;
      }
    }
  }
  return d;
}

}  // namespace

GnnModel init_gnn_model(int in_dim, int hidden, std::vector<std::string> class_ids,
                        Activation act, std::uint64_t seed) {
  if (in_dim <= 0 || hidden <= 0 || class_ids.empty()) fail("init_gnn_model: bad shapes");
  GnnModel m;
  m.in_dim = in_dim;
  m.hidden = hidden;
  m.act = act;
  m.class_ids = std::move(class_ids);
  m.W1.resize(hidden, 2 * in_dim);
  m.W2.resize(hidden, 2 * hidden);
  m.Wo.resize(static_cast<Eigen::Index>(m.class_ids.size()), hidden);
  Rng rng(derive_seed(seed, "gnn-init"));
  glorot_fill(m.W1, rng);
  glorot_fill(m.W2, rng);
  glorot_fill(m.Wo, rng);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.b2 = Eigen::VectorXd::Zero(hidden);
  m.bo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.class_ids.size()));
  return m;
}

Eigen::MatrixXd gnn_forward(const GnnModel& m, const HinGraph& g, const FeatureMatrix& X,
                            const std::vector<NodeId>& users) {
  if (X.dim != m.in_dim) fail("gnn_forward: feature dim does not match the model");
  AggIndex idx = AggIndex::build(g, X);
  ForwardCache c = forward_all(m, X, idx);
  return user_probs(m, c, users);
}

double loss_acc(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(probs.rows()) != labels.size())
    fail("loss_acc: one label per scored user required");
  if (labels.empty()) fail("loss_acc: empty batch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    s -= std::log(std::max(probs(i, labels[i]), kProbFloor));
  return s / static_cast<double>(labels.size());
}

double loss_dp(const Eigen::MatrixXd& probs, const std::vector<std::uint8_t>& groups) {
  if (static_cast<std::size_t>(probs.rows()) != groups.size())
    fail("loss_dp: one group per scored user required");
  double n0 = 0, n1 = 0;
  Eigen::RowVectorXd s0 = Eigen::RowVectorXd::Zero(probs.cols());
  Eigen::RowVectorXd s1 = Eigen::RowVectorXd::Zero(probs.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    if (groups[i] == 0) {
      s0 += probs.row(i);
      ++n0;
    } else {
      s1 += probs.row(i);
      ++n1;
    }
  }
  if (n0 == 0 || n1 == 0) fail("loss_dp: both groups must be present in the batch");
  return (s0 / n0 - s1 / n1).squaredNorm();
}

double loss_eo(const Eigen::MatrixXd& probs, const std::vector<std::uint8_t>& groups,
               const std::vector<int>& labels, int* skipped) {
  if (static_cast<std::size_t>(probs.rows()) != groups.size() || groups.size() != labels.size())
    fail("loss_eo: probs, groups and labels must align");
  double loss = 0.0;
  int skip = 0;
  for (Eigen::Index k = 0; k < probs.cols(); ++k) {
    double c0 = 0, c1 = 0, s0 = 0, s1 = 0;
    bool present = false;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      if (labels[i] != k) continue;
      present = true;
      if (groups[i] == 0) {
        ++c0;
        s0 += probs(i, k);
      } else {
        ++c1;
        s1 += probs(i, k);
      }
    }
    if (c0 == 0 || c1 == 0) {
      if (present) ++skip;  // class exists but only on one side
      continue;
    }
    const double diff = s0 / c0 - s1 / c1;
    loss += diff * diff;
  }
  if (skipped) *skipped = skip;
  return loss;
}

namespace {

GnnGradients loss_and_grad_impl(const GnnModel& m, const FeatureMatrix& X, const AggIndex& idx,
                                const GnnBatch& batch, const FairLossConfig& fair) {
  if (batch.users.empty()) fail("gnn_loss_and_grad: empty batch");
  const int f = m.in_dim;
  const int h = m.hidden;
  const Eigen::Index mrows = static_cast<Eigen::Index>(batch.users.size());

  ForwardCache c = forward_all(m, X, idx);
  Eigen::MatrixXd P = user_probs(m, c, batch.users);

  GnnGradients out;
  out.acc_part = loss_acc(P, batch.labels);
  out.loss = out.acc_part;

  // d loss / d logits. The accuracy term contributes (P - Y) / m directly;
  // the fairness term goes through the softmax Jacobian.
  Eigen::MatrixXd dlogits = P;
  for (Eigen::Index i = 0; i < mrows; ++i) dlogits(i, batch.labels[i]) -= 1.0;
  dlogits /= static_cast<double>(mrows);

  if (fair.mode != FairLossConfig::Mode::none && fair.lambda != 0.0) {
    if (fair.mode == FairLossConfig::Mode::dp)
      out.fair_part = loss_dp(P, batch.groups);
    else
      out.fair_part = loss_eo(P, batch.groups, batch.labels);
    out.loss += fair.lambda * out.fair_part;
    Eigen::MatrixXd dP = fair.lambda * fair_dprobs(fair.mode, P, batch.groups, batch.labels);
    dlogits += softmax_backward(P, dP);
  }

  // Backprop through the classifier head.
  Eigen::MatrixXd H2_users(mrows, h);
  for (Eigen::Index i = 0; i < mrows; ++i) H2_users.row(i) = c.H2.row(batch.users[i]);
  out.Wo = dlogits.transpose() * H2_users;
  out.bo = dlogits.colwise().sum().transpose();

  Eigen::MatrixXd dH2 = Eigen::MatrixXd::Zero(c.H2.rows(), h);
  Eigen::MatrixXd dH2_users = dlogits * m.Wo;
  for (Eigen::Index i = 0; i < mrows; ++i) dH2.row(batch.users[i]) += dH2_users.row(i);

  // Layer 2.
  Eigen::MatrixXd dZ2 = dH2.cwiseProduct(activate_grad(m.act, c.Z2, c.H2));
  out.W2.resize(h, 2 * h);
  out.W2.leftCols(h) = dZ2.transpose() * c.H1;
  out.W2.rightCols(h) = dZ2.transpose() * c.A1;
  out.b2 = dZ2.colwise().sum().transpose();
  Eigen::MatrixXd dH1 =
      dZ2 * m.W2.leftCols(h) + aggregate_adjoint(idx, dZ2 * m.W2.rightCols(h));

  // Layer 1.
  Eigen::MatrixXd dZ1 = dH1.cwiseProduct(activate_grad(m.act, c.Z1, c.H1));
  out.W1.resize(h, 2 * f);
  out.W1.leftCols(f) = dZ1.transpose() * X.rows;
  out.W1.rightCols(f) = dZ1.transpose() * c.A0;
  out.b1 = dZ1.colwise().sum().transpose();
  return out;
}

}  // namespace

GnnGradients gnn_loss_and_grad(const GnnModel& m, const HinGraph& g, const FeatureMatrix& X,
                               const GnnBatch& batch, const FairLossConfig& fair) {
  return loss_and_grad_impl(m, X, AggIndex::build(g, X), batch, fair);
}

GnnTrainResult train_gnn(const HinGraph& g, const FeatureMatrix& X,
                         std::vector<std::string> class_ids, const GnnBatch& train,
                         const GnnBatch& val, const FairLossConfig& fair, const GnnConfig& cfg) {
  if (train.users.empty()) fail("train_gnn: empty training set");
  if (val.users.empty()) fail("train_gnn: empty validation set");

  GnnTrainResult res;
  GnnModel model =
      init_gnn_model(X.dim, cfg.hidden, std::move(class_ids), cfg.act, cfg.seed);
  AggIndex idx = AggIndex::build(g, X);

  auto val_mrr = [&](const GnnModel& m) {
    ForwardCache c = forward_all(m, X, idx);
    return mrr_of_probs(user_probs(m, c, val.users), val.labels);
  };

  res.model = model;
  res.best_val_mrr = val_mrr(model);
  res.best_epoch = 0;
  GnnModel last_finite = model;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    GnnGradients grad = loss_and_grad_impl(model, X, idx, train, fair);
    if (!std::isfinite(grad.loss)) {
      res.diverged = true;
      model = last_finite;
      break;
    }
    last_finite = model;
    model.W1 -= cfg.lr * grad.W1;
    model.b1 -= cfg.lr * grad.b1;
    model.W2 -= cfg.lr * grad.W2;
    model.b2 -= cfg.lr * grad.b2;
    model.Wo -= cfg.lr * grad.Wo;
    model.bo -= cfg.lr * grad.bo;
    res.epochs_run = epoch;

    const double mrr = val_mrr(model);
    if (mrr > res.best_val_mrr) {
      res.best_val_mrr = mrr;
      res.best_epoch = epoch;
      res.model = model;
    } else if (epoch - res.best_epoch >= cfg.patience) {
      break;
    }
  }
  return res;
}

void save_gnn_model(const std::string& path, const GnnModel& m) {
  nlohmann::json header;
  header["version"] = 1;
  header["in_dim"] = m.in_dim;
  header["hidden"] = m.hidden;
  header["activation"] = m.act == Activation::tanh ? "tanh" : "relu";
  header["classes"] = m.class_ids;
  const std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail("save_gnn_model: cannot open '" + path + "'");
  out.write("FHGN", 4);
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
  write_mat(m.W1);
  write_mat(m.b1);
  write_mat(m.W2);
  write_mat(m.b2);
  write_mat(m.Wo);
  write_mat(m.bo);
  if (!out) fail("save_gnn_model: write failed for '" + path + "'");
}

GnnModel load_gnn_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("load_gnn_model: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "FHGN") fail("load_gnn_model: bad magic in '" + path + "'");
  std::uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 4);
  std::string hs(hlen, '\0');
  in.read(hs.data(), hlen);
  if (!in) fail("load_gnn_model: truncated header in '" + path + "'");
  nlohmann::json header = nlohmann::json::parse(hs);
  if (header.at("version").get<int>() != 1) fail("load_gnn_model: unsupported version");

  GnnModel m;
  m.in_dim = header.at("in_dim").get<int>();
  m.hidden = header.at("hidden").get<int>();
  m.act = header.at("activation").get<std::string>() == "tanh" ? Activation::tanh
                                                               : Activation::relu;
  m.class_ids = header.at("classes").get<std::vector<std::string>>();
  const int K = m.num_classes();
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
  read_mat(m.W1, m.hidden, 2 * m.in_dim);
  read_mat(b, m.hidden, 1);
  m.b1 = b.col(0);
  read_mat(m.W2, m.hidden, 2 * m.hidden);
  read_mat(b, m.hidden, 1);
  m.b2 = b.col(0);
  read_mat(m.Wo, K, m.hidden);
  read_mat(b, K, 1);
  m.bo = b.col(0);
  if (!in) fail("load_gnn_model: truncated payload in '" + path + "'");
  return m;
}

}  // namespace fairhin
