#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fairhin/rng.hpp"

namespace fairhin {

// Numerically stable row-wise softmax in place.
inline void softmax_rows(Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double mx = m.row(i).maxCoeff();
    m.row(i) = (m.row(i).array() - mx).exp();
    m.row(i) /= m.row(i).sum();
  }
}

// Rank of `label` in probability row i: classes with strictly higher
// probability rank ahead, ties break by ascending class index.
inline int rank_of_label(const Eigen::MatrixXd& probs, Eigen::Index i, int label) {
  const double p = probs(i, label);
  int rank = 1;
  for (Eigen::Index j = 0; j < probs.cols(); ++j) {
    if (probs(i, j) > p) ++rank;
    else if (probs(i, j) == p && j < label) ++rank;
  }
  return rank;
}

inline double mrr_of_probs(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
  if (labels.empty()) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    s += 1.0 / rank_of_label(probs, i, labels[i]);
  return s / static_cast<double>(labels.size());
}

// Symmetric uniform init scaled by fan-in/fan-out.
inline void glorot_fill(Eigen::MatrixXd& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform(-limit, limit);
}

// Jacobian-vector product of the row-wise softmax: given dL/dP, returns
// dL/dlogits with dlogit_j = p_j * (dp_j - sum_i dp_i p_i).
inline Eigen::MatrixXd softmax_backward(const Eigen::MatrixXd& probs,
                                        const Eigen::MatrixXd& dprobs) {
  Eigen::MatrixXd out(probs.rows(), probs.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    const double inner = probs.row(i).dot(dprobs.row(i));
    out.row(i) = probs.row(i).array() * (dprobs.row(i).array() - inner);
  }
  return out;
}

}  // namespace fairhin
