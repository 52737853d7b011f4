#include "fairhin/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fairhin/rng.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// Sorted class set shared by all records; also validates the permutation
// contract lightly (uniform ranking size, truth present).
std::vector<std::string> class_set(std::span<const PredictionRecord> records) {
  if (records.empty()) fail("metrics: empty record set");
  std::set<std::string> classes(records.front().ranking.begin(), records.front().ranking.end());
  for (const auto& r : records) {
    if (r.ranking.size() != classes.size())
      fail("metrics: rankings differ in length (not permutations of one career set)");
    if (!classes.count(r.ranking.front()))
      fail("metrics: ranking of user '" + r.user + "' uses an unknown career");
    if (!classes.count(r.truth))
      fail("metrics: truth '" + r.truth + "' of user '" + r.user + "' not in the career set");
  }
  return {classes.begin(), classes.end()};
}

void require_both_groups(std::span<const PredictionRecord> records, const char* what) {
  bool has0 = false, has1 = false;
  for (const auto& r : records) (r.group == 0 ? has0 : has1) = true;
  if (!has0 || !has1) fail(std::string(what) + ": a protected group is empty");
}

}  // namespace

double mrr(std::span<const PredictionRecord> records) {
  if (records.empty()) fail("mrr: empty record set");
  double s = 0.0;
  for (const auto& r : records) {
    auto it = std::find(r.ranking.begin(), r.ranking.end(), r.truth);
    if (it == r.ranking.end())
      fail("mrr: truth '" + r.truth + "' missing from the ranking of user '" + r.user + "'");
    s += 1.0 / static_cast<double>(it - r.ranking.begin() + 1);
  }
  return s / static_cast<double>(records.size());
}

double diff_dp(std::span<const PredictionRecord> records) {
  const auto classes = class_set(records);
  require_both_groups(records, "diff_dp");
  std::map<std::string, std::array<double, 2>> top1;  // class -> per-group count
  double n[2] = {0, 0};
  for (const auto& r : records) {
    ++top1[r.ranking.front()][r.group];
    ++n[r.group];
  }
  double sum = 0.0;
  for (const auto& k : classes) {
    auto it = top1.find(k);
    const double c0 = it == top1.end() ? 0.0 : it->second[0];
    const double c1 = it == top1.end() ? 0.0 : it->second[1];
    sum += std::abs(c0 / n[0] - c1 / n[1]);
  }
  return sum;
}

double diff_eo(std::span<const PredictionRecord> records, int* skipped) {
  const auto classes = class_set(records);
  require_both_groups(records, "diff_eo");
  // N_k^i = members of group i predicted as k; N_kk^i = those also correct.
  std::map<std::string, std::array<double, 2>> pred, correct;
  for (const auto& r : records) {
    const std::string& top = r.ranking.front();
    ++pred[top][r.group];
    if (top == r.truth) ++correct[top][r.group];
  }
  double sum = 0.0;
  int skip = 0;
  for (const auto& k : classes) {
    auto it = pred.find(k);
    const double p0 = it == pred.end() ? 0.0 : it->second[0];
    const double p1 = it == pred.end() ? 0.0 : it->second[1];
    if (p0 == 0.0 || p1 == 0.0) {
      if (p0 != 0.0 || p1 != 0.0) ++skip;  // predicted by one group only
      continue;
    }
    auto ic = correct.find(k);
    const double c0 = ic == correct.end() ? 0.0 : ic->second[0];
    const double c1 = ic == correct.end() ? 0.0 : ic->second[1];
    sum += std::abs(c0 / p0 - c1 / p1);
  }
  if (skipped) *skipped = skip;
  return sum;
}

std::vector<std::size_t> pareto_frontier(const std::vector<std::pair<double, double>>& points) {
  for (const auto& [m, d] : points)
    if (!std::isfinite(m) || !std::isfinite(d)) fail("pareto_frontier: non-finite point");

  // Sweep in descending-MRR order keeping the running minimum fairness gap.
  // A point survives iff its gap undercuts everything with strictly higher
  // MRR and nothing with equal MRR has a strictly smaller gap.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].first != points[b].first) return points[a].first > points[b].first;
    if (points[a].second != points[b].second) return points[a].second < points[b].second;
    return a < b;
  });

  std::vector<std::size_t> out;
  double min_gap_above = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && points[order[j]].first == points[order[i]].first) ++j;
    const double group_min = points[order[i]].second;  // sorted: first is smallest
    if (group_min < min_gap_above) {
      for (std::size_t k = i; k < j && points[order[k]].second == group_min; ++k) {
        // exact duplicates collapse to the earliest original index
        if (k > i && points[order[k]] == points[order[k - 1]]) continue;
        out.push_back(order[k]);
      }
      min_gap_above = group_min;
    }
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct CellStats {
  double mrr_sum = 0.0;
  double fair_sum = 0.0;
  int n = 0;
};

}  // namespace

ThresholdTable threshold_select(std::span<const EvalReport> reports, double baseline_fairness,
                                FairnessMetric metric) {
  ThresholdTable table;
  table.metric = metric;
  table.baseline = baseline_fairness;
  table.thresholds = {baseline_fairness, 0.75 * baseline_fairness, 0.5 * baseline_fairness};

  // Aggregate over seeds and folds per (method, params).
  std::vector<std::string> method_order;
  std::map<std::pair<std::string, std::string>, CellStats> agg;
  for (const auto& r : reports) {
    if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end())
      method_order.push_back(r.method);
    CellStats& c = agg[{r.method, r.params}];
    c.mrr_sum += r.mrr;
    c.fair_sum += metric == FairnessMetric::dp ? r.diff_dp : r.diff_eo;
    ++c.n;
  }

  for (const auto& method : method_order) {
    ThresholdRow row;
    row.method = method;
    for (int t = 0; t < 3; ++t) {
      ThresholdCell& cell = row.cells[t];
      for (const auto& [key, stats] : agg) {
        if (key.first != method) continue;
        const double mean_fair = stats.fair_sum / stats.n;
        const double mean_mrr = stats.mrr_sum / stats.n;
        if (mean_fair > table.thresholds[t]) continue;
        if (!cell.filled || mean_mrr > cell.mrr) {
          cell.filled = true;
          cell.mrr = mean_mrr;
          cell.params = key.second;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double gnn_baseline_for_fairness(std::span<const EvalReport> reports, FairnessMetric metric,
                                 const std::string& baseline_method) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : reports) {
    if (r.method != baseline_method) continue;
    sum += metric == FairnessMetric::dp ? r.diff_dp : r.diff_eo;
    ++n;
  }
  if (n == 0) fail("gnn_baseline_for_fairness: no '" + baseline_method + "' runs in the reports");
  return sum / n;
}

SplitResult nested_cv_split(const std::vector<std::pair<std::string, std::string>>& user_careers,
                            std::uint64_t seed) {
  if (user_careers.empty()) fail("nested_cv_split: empty user set");

  std::map<std::string, std::vector<std::string>> strata;
  for (const auto& [user, career] : user_careers) strata[career].push_back(user);

  SplitResult res;
  std::size_t min_size = user_careers.size();
  for (const auto& [career, members] : strata) min_size = std::min(min_size, members.size());
  if (min_size < 10) {
    res.stratified = false;
    res.warnings.push_back("a career has fewer than 10 labeled users; splitting without "
                           "stratification");
    std::vector<std::string> all;
    all.reserve(user_careers.size());
    for (const auto& [user, career] : user_careers) all.push_back(user);
    std::sort(all.begin(), all.end());
    strata = {{"", std::move(all)}};
  }

  constexpr int kFolds = 3;
  res.plans.resize(kFolds);
  for (auto& [career, members] : strata) {
    std::sort(members.begin(), members.end());
    Rng rng(derive_seed(seed, "cv-stratum", {fnv1a64(career)}));
    rng.shuffle(members);

    const std::size_t n = members.size();
    const std::size_t n_embed = static_cast<std::size_t>(std::llround(0.4 * n));
    for (std::size_t i = 0; i < n_embed; ++i)
      for (auto& plan : res.plans) plan.embed.push_back(members[i]);

    // Remaining 60% -> three folds round-robin; each serves as test once,
    // the other two split 3:1 into train and validation.
    std::array<std::vector<std::string>, kFolds> folds;
    for (std::size_t i = n_embed; i < n; ++i) folds[(i - n_embed) % kFolds].push_back(members[i]);
    for (int test_fold = 0; test_fold < kFolds; ++test_fold) {
      SplitPlan& plan = res.plans[test_fold];
      for (const auto& u : folds[test_fold]) plan.test.push_back(u);
      std::vector<std::string> trainval;
      for (int f = 0; f < kFolds; ++f)
        if (f != test_fold) trainval.insert(trainval.end(), folds[f].begin(), folds[f].end());
      const std::size_t n_val = static_cast<std::size_t>(std::llround(trainval.size() / 4.0));
      for (std::size_t i = 0; i < trainval.size(); ++i)
        (i < n_val ? plan.val : plan.train).push_back(trainval[i]);
    }
  }
  for (auto& plan : res.plans) {
    std::sort(plan.embed.begin(), plan.embed.end());
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.val.begin(), plan.val.end());
    std::sort(plan.test.begin(), plan.test.end());
  }
  return res;
}

HinGraph balance_data(const HinGraph& g, std::uint64_t seed) {
  auto career_type = g.type_id("career");
  if (!career_type) fail("balance_data: graph has no 'career' type");
  const std::uint8_t adv = g.advantaged_group();
  const std::uint8_t dis = g.disadvantaged_group();

  std::set<NodeId> removed;
  for (NodeId c : g.nodes_of_type(*career_type)) {
    auto adv_users = g.neighbors_by_type_and_group(c, g.protected_type(), adv);
    auto dis_users = g.neighbors_by_type_and_group(c, g.protected_type(), dis);
    if (adv_users.size() <= dis_users.size()) continue;
    std::vector<NodeId> pool(adv_users.begin(), adv_users.end());
    Rng rng(derive_seed(seed, "balance", {c}));
    rng.shuffle(pool);
    const std::size_t excess = adv_users.size() - dis_users.size();
    for (std::size_t i = 0; i < excess; ++i) removed.insert(pool[i]);
  }

  std::vector<NodeSpec> nodes;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (removed.count(v)) continue;
    const std::uint8_t grp = g.group_of(v);
    nodes.push_back({g.original_id(v), g.type_name(g.node_type(v)),
                     grp == kNoGroup ? std::string() : g.group_name(grp)});
  }
  std::vector<EdgeSpec> edges;
  for (const Edge& e : g.edges()) {
    if (removed.count(e.u) || removed.count(e.v)) continue;
    edges.push_back({g.original_id(e.u), g.relations()[e.rel].name, g.original_id(e.v)});
  }
  return build_graph(nodes, edges, g.attribute_name());
}

void write_reports_csv(const std::string& path, std::span<const EvalReport> reports) {
  std::ofstream out(path);
  if (!out) fail("write_reports_csv: cannot open '" + path + "'");
  out << "method,params,seed,split,mrr,diff_dp,diff_eo\n";
  char buf[64];
  for (const auto& r : reports) {
    if (r.method.find(',') != std::string::npos || r.params.find(',') != std::string::npos)
      fail("write_reports_csv: method/params must not contain commas");
    out << r.method << ',' << r.params << ',' << r.seed << ',' << r.split;
    for (double x : {r.mrr, r.diff_dp, r.diff_eo}) {
      std::snprintf(buf, sizeof buf, ",%.9g", x);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<EvalReport> read_reports_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_reports_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail("read_reports_csv: empty file '" + path + "'");
  std::vector<EvalReport> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 7)
      fail("read_reports_csv: " + path + ":" + std::to_string(lineno) + ": expected 7 fields");
    EvalReport r;
    r.method = f[0];
    r.params = f[1];
    r.seed = std::stoull(f[2]);
    r.split = std::stoi(f[3]);
    r.mrr = std::stod(f[4]);
    r.diff_dp = std::stod(f[5]);
    r.diff_eo = std::stod(f[6]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fairhin
