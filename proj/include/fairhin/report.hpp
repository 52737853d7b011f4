#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairhin/eval.hpp"

namespace fairhin {

// One aggregated (method, params) cell: metric means over seeds and folds.
struct MeanPoint {
  std::string method;
  std::string params;
  double mrr = 0.0;
  double diff_dp = 0.0;
  double diff_eo = 0.0;
  int runs = 0;
};

std::vector<MeanPoint> aggregate_reports(std::span<const EvalReport> reports);

// Per-method Pareto frontier over the mean points of its settings.
struct MethodFrontier {
  std::string method;
  std::vector<MeanPoint> points;  // non-dominated, sorted by mrr descending
};

std::vector<MethodFrontier> method_frontiers(std::span<const EvalReport> reports,
                                             FairnessMetric metric);

// Writes tables.json, tables.txt (aligned text), pareto_<metric>.json and
// per_seed_points.csv under out_dir. The LF/MF/HF baselines come from the
// plain runs of baseline_method.
void write_report_tables(std::span<const EvalReport> reports, const std::string& baseline_method,
                         const std::string& out_dir);

std::string format_threshold_table(const ThresholdTable& dp, const ThresholdTable& eo);

}  // namespace fairhin
