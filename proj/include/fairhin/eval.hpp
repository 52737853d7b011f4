#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairhin/graph.hpp"

namespace fairhin {

// One scored user: the full predicted career ranking (best first) plus the
// ground truth and protected group. Every ranking must be a permutation of
// the same career set.
struct PredictionRecord {
  std::string user;
  std::uint8_t group = 0;
  std::string truth;
  std::vector<std::string> ranking;
};

// One (method, hyper-parameters, seed, fold) measurement; the unit of
// Pareto and threshold selection.
struct EvalReport {
  std::string method;
  std::string params;  // "key=value;key=value"
  std::uint64_t seed = 0;
  int split = 0;
  double mrr = 0.0;
  double diff_dp = 0.0;
  double diff_eo = 0.0;
};

enum class FairnessMetric { dp, eo };

/// Mean reciprocal rank of the truth in each ranking.
double mrr(std::span<const PredictionRecord> records);

/// sum_k |N_k^0/N^0 - N_k^1/N^1| over top-1 predictions; in [0, 2].
double diff_dp(std::span<const PredictionRecord> records);

// sum_k |correct-in-k share of group 0 - same for group 1| where shares are
// taken over members *predicted* as k; classes predicted by only one group
// are skipped (count via skipped).
double diff_eo(std::span<const PredictionRecord> records, int* skipped = nullptr);

// Indices of points not dominated by any other, ascending; exact duplicates
// collapse to their first occurrence. A dominates B iff mrr_A >= mrr_B and
// diff_A <= diff_B with at least one strict.
std::vector<std::size_t> pareto_frontier(const std::vector<std::pair<double, double>>& points);

struct ThresholdCell {
  bool filled = false;
  double mrr = 0.0;
  std::string params;
};

struct ThresholdRow {
  std::string method;
  std::array<ThresholdCell, 3> cells;  // LF, MF, HF
};

struct ThresholdTable {
  FairnessMetric metric = FairnessMetric::dp;
  double baseline = 0.0;
  std::array<double, 3> thresholds{};  // LF = baseline, MF = 0.75x, HF = 0.5x
  std::vector<ThresholdRow> rows;      // methods in first-appearance order
};

// Aggregates reports by (method, params) into mean MRR / mean fairness over
// seeds and folds, then reports per method the best mean MRR among settings
// whose mean fairness gap is within each threshold. Cells stay empty when no
// setting qualifies.
ThresholdTable threshold_select(std::span<const EvalReport> reports, double baseline_fairness,
                                FairnessMetric metric);

/// Mean fairness gap of the plain-GNN runs; the threshold baseline.
double gnn_baseline_for_fairness(std::span<const EvalReport> reports, FairnessMetric metric,
                                 const std::string& baseline_method = "gnn");

// Four disjoint user sets per fold; the embedding-train set is shared by all
// three folds. Proportions 4:3:1:2 (+-1 from per-stratum rounding).
struct SplitPlan {
  std::vector<std::string> embed;
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

struct SplitResult {
  std::vector<SplitPlan> plans;  // one per test fold (3)
  bool stratified = true;
  std::vector<std::string> warnings;
};

// Stratified by career when every career has >= 10 labeled users, otherwise
// a single stratum with a warning. Deterministic per seed.
SplitResult nested_cv_split(const std::vector<std::pair<std::string, std::string>>& user_careers,
                            std::uint64_t seed);

// Per career, down-samples advantaged-group users (removing the whole node)
// until the group counts among that career's linked users are equal. Applied
// to the embedding-training graph only; prediction splits are untouched.
HinGraph balance_data(const HinGraph& g, std::uint64_t seed);

// reports CSV: header method,params,seed,split,mrr,diff_dp,diff_eo
void write_reports_csv(const std::string& path, std::span<const EvalReport> reports);
std::vector<EvalReport> read_reports_csv(const std::string& path);

}  // namespace fairhin
