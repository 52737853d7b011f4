#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairhin/datasets.hpp"
#include "fairhin/gnn.hpp"
#include "fairhin/metapath.hpp"
#include "fairhin/mlp.hpp"
#include "fairhin/skipgram.hpp"

namespace fairhin {

// Flat sectioned key=value file ('#' and ';' start comments).
//   [section]
//   key = value
using IniFile = std::map<std::string, std::map<std::string, std::string>>;

IniFile parse_ini(const std::string& path);
IniFile parse_ini_text(const std::string& text);

// Everything one end-to-end run needs. Defaults follow the experimental
// protocol: embeddings d=128 / 5 negatives / window 5, GNN with two layers
// and hidden width 128, feature dim 50.
struct PipelineConfig {
  // dataset
  std::string dataset_kind = "synth";  // synth | movielens | dir
  std::string data_dir;
  SyntheticSpec synth;

  // protocol
  std::uint64_t split_seed = 1;
  int num_seeds = 5;
  std::uint64_t base_seed = 100;

  // run
  std::string method = "m2v";
  std::string out_dir;        // empty = keep everything in memory
  bool write_artifacts = true;

  // stages
  int num_walks = 10;
  int walk_length = 10;
  double ratio = 1.0;
  bool literal_r = false;
  SkipGramConfig skipgram;
  MlpConfig mlp;
  GnnConfig gnn;
  int feature_dim = 50;
  double lambda = 0.0;
};

struct SweepConfig {
  PipelineConfig base;
  std::vector<std::string> methods;
  std::vector<int> num_walks_grid;
  std::vector<int> walk_length_grid;
  std::vector<double> ratio_grid;
  std::vector<double> lambda_grid;
  int jobs = 1;
};

PipelineConfig pipeline_config_from_ini(const IniFile& ini);
SweepConfig sweep_config_from_ini(const IniFile& ini);

}  // namespace fairhin
