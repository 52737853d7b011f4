#pragma once

#include <string>
#include <vector>

#include "fairhin/config.hpp"
#include "fairhin/eval.hpp"
#include "fairhin/mlp.hpp"

namespace fairhin {

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> m = {"balance-data", "m2v",    "m2v+fair",
                                             "m2v+proj",     "m2v+fair+proj",
                                             "gnn",          "gnn-dp", "gnn-eo"};
  return m;
}

// Executes split -> (sample -> embed -> [debias] -> mlp) or
// (features -> gnn) -> evaluate for every (fold, seed) cell. With an out_dir
// every stage writes its artifact and continues from the re-loaded file, so
// a run resumed from persisted intermediates equals an uninterrupted one.
std::vector<EvalReport> run_pipeline(const DatasetBundle& data, const PipelineConfig& cfg);
std::vector<EvalReport> run_pipeline(const PipelineConfig& cfg);

// Loads the dataset named by cfg (synth spec, movielens dir, or canonical
// dataset dir; FAIRHIN_DATA_DIR supplies the directory when dir is empty).
DatasetBundle load_for_config(const PipelineConfig& cfg);

// Grid sweep over (method, hyper-parameters); every cell runs the full
// pipeline for all folds and seeds. Cells are independent and can run on
// `jobs` threads; the report order never depends on scheduling.
std::vector<EvalReport> run_sweep(const DatasetBundle& data, const SweepConfig& cfg);

// rankings TSV: user_id<TAB>rank<TAB>career_id<TAB>probability
using UserRanking = std::pair<std::string, std::vector<RankedCareer>>;
void write_rankings_tsv(const std::string& path, std::span<const UserRanking> rankings);
std::vector<UserRanking> read_rankings_tsv(const std::string& path);

// splits JSON: {"stratified": bool, "embed": [...], "folds":
//   [{"train": [...], "val": [...], "test": [...]}, ...]}
void write_splits_json(const std::string& path, const SplitResult& splits);
SplitResult read_splits_json(const std::string& path);

std::unordered_map<std::string, std::string> read_groups_tsv(const std::string& path);

}  // namespace fairhin
