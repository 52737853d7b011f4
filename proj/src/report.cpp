#include "fairhin/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fairhin {

namespace {

std::string fmt4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

std::vector<MeanPoint> aggregate_reports(std::span<const EvalReport> reports) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, MeanPoint> agg;
  for (const auto& r : reports) {
    const auto key = std::make_pair(r.method, r.params);
    auto it = agg.find(key);
    if (it == agg.end()) {
      order.push_back(key);
      it = agg.emplace(key, MeanPoint{r.method, r.params, 0, 0, 0, 0}).first;
    }
    it->second.mrr += r.mrr;
    it->second.diff_dp += r.diff_dp;
    it->second.diff_eo += r.diff_eo;
    ++it->second.runs;
  }
  std::vector<MeanPoint> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    MeanPoint p = agg.at(key);
    p.mrr /= p.runs;
    p.diff_dp /= p.runs;
    p.diff_eo /= p.runs;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<MethodFrontier> method_frontiers(std::span<const EvalReport> reports,
                                             FairnessMetric metric) {
  const auto points = aggregate_reports(reports);
  std::vector<std::string> methods;
  for (const auto& p : points)
    if (std::find(methods.begin(), methods.end(), p.method) == methods.end())
      methods.push_back(p.method);

  std::vector<MethodFrontier> out;
  for (const auto& method : methods) {
    std::vector<MeanPoint> mine;
    std::vector<std::pair<double, double>> coords;
    for (const auto& p : points) {
      if (p.method != method) continue;
      mine.push_back(p);
      coords.emplace_back(p.mrr, metric == FairnessMetric::dp ? p.diff_dp : p.diff_eo);
    }
    MethodFrontier front;
    front.method = method;
    for (std::size_t i : pareto_frontier(coords)) front.points.push_back(mine[i]);
    std::sort(front.points.begin(), front.points.end(),
              [](const MeanPoint& a, const MeanPoint& b) { return a.mrr > b.mrr; });
    out.push_back(std::move(front));
  }
  return out;
}

std::string format_threshold_table(const ThresholdTable& dp, const ThresholdTable& eo) {
  std::ostringstream out;
  out << "thresholds  dp: LF=" << fmt4(dp.thresholds[0]) << " MF=" << fmt4(dp.thresholds[1])
      << " HF=" << fmt4(dp.thresholds[2]) << "   eo: LF=" << fmt4(eo.thresholds[0])
      << " MF=" << fmt4(eo.thresholds[1]) << " HF=" << fmt4(eo.thresholds[2]) << "\n\n";

  std::size_t width = 8;
  for (const auto& row : dp.rows) width = std::max(width, row.method.size());
  out << std::string(width, ' ') << "  dp_LF   dp_MF   dp_HF   eo_LF   eo_MF   eo_HF\n";
  for (std::size_t i = 0; i < dp.rows.size(); ++i) {
    const auto& name = dp.rows[i].method;
    out << name << std::string(width - name.size(), ' ');
    for (const auto* table : {&dp, &eo}) {
      for (const auto& cell : table->rows[i].cells)
        out << "  " << (cell.filled ? fmt4(cell.mrr) : "--    ");
    }
    out << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json table_json(const ThresholdTable& t) {
  nlohmann::json j;
  j["metric"] = t.metric == FairnessMetric::dp ? "dp" : "eo";
  j["baseline"] = t.baseline;
  j["thresholds"] = {{"LF", t.thresholds[0]}, {"MF", t.thresholds[1]}, {"HF", t.thresholds[2]}};
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r;
    r["method"] = row.method;
    const char* names[3] = {"LF", "MF", "HF"};
    for (int i = 0; i < 3; ++i) {
      if (row.cells[i].filled)
        r[names[i]] = {{"mrr", row.cells[i].mrr}, {"params", row.cells[i].params}};
      else
        r[names[i]] = nullptr;  // the "--" cells
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

}  // namespace

void write_report_tables(std::span<const EvalReport> reports, const std::string& baseline_method,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  const double base_dp = gnn_baseline_for_fairness(reports, FairnessMetric::dp, baseline_method);
  const double base_eo = gnn_baseline_for_fairness(reports, FairnessMetric::eo, baseline_method);
  const ThresholdTable dp = threshold_select(reports, base_dp, FairnessMetric::dp);
  const ThresholdTable eo = threshold_select(reports, base_eo, FairnessMetric::eo);

  nlohmann::json tables;
  tables["dp"] = table_json(dp);
  tables["eo"] = table_json(eo);
  {
    std::ofstream out(out_dir + "/tables.json");
    if (!out) throw std::runtime_error("write_report_tables: cannot open tables.json");
    out << tables.dump(2) << '\n';
  }
  {
    std::ofstream out(out_dir + "/tables.txt");
    out << format_threshold_table(dp, eo);
  }

  for (FairnessMetric metric : {FairnessMetric::dp, FairnessMetric::eo}) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& front : method_frontiers(reports, metric)) {
      nlohmann::json f;
      f["method"] = front.method;
      f["points"] = nlohmann::json::array();
      for (const auto& p : front.points)
        f["points"].push_back({{"params", p.params},
                               {"mrr", p.mrr},
                               {"diff_dp", p.diff_dp},
                               {"diff_eo", p.diff_eo},
                               {"runs", p.runs}});
      j.push_back(std::move(f));
    }
    const std::string name = metric == FairnessMetric::dp ? "pareto_dp.json" : "pareto_eo.json";
    std::ofstream out(out_dir + "/" + name);
    out << j.dump(2) << '\n';
  }

  // Per-seed points go to a side file; the frontiers above use mean points.
  write_reports_csv(out_dir + "/per_seed_points.csv", reports);
}

}  // namespace fairhin
