#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairhin/embedding.hpp"

namespace fairhin {

// Unit vector between the two groups' mean embedding directions.
struct BiasDirection {
  std::vector<double> v;
};

// Sum of member vectors normalized to unit length. Errors: empty member
// list, member missing from the table, zero-norm sum.
std::vector<double> group_direction(const EmbeddingTable& emb,
                                    std::span<const std::string> members);

// (g0 - g1) normalized. A zero-norm difference means the groups are already
// indistinguishable; signaled so the caller may skip projection.
BiasDirection bias_direction(const std::vector<double>& g0, const std::vector<double>& g1);

/// e - <e, v_b> v_b; exactly orthogonal to v_b up to rounding.
std::vector<double> debias(const std::vector<double>& e, const BiasDirection& vb);

struct DebiasOutcome {
  bool applied = false;          // false when the bias direction had zero norm
  std::size_t users_projected = 0;
  BiasDirection direction;       // empty when !applied
};

// Computes the bias direction from the two fit groups (users the embeddings
// were trained on) and projects every vector in apply_users that is present
// in the table. Non-user vectors are untouched.
DebiasOutcome debias_all(EmbeddingTable& emb, std::span<const std::string> fit_g0,
                         std::span<const std::string> fit_g1,
                         std::span<const std::string> apply_users);

}  // namespace fairhin
