#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fairhin/graph.hpp"

namespace fairhin {

// A loaded dataset: the typed graph (user/item/career with like/choose
// edges), the user->career ground truth, and the item text tokens that feed
// feature hashing.
struct DatasetBundle {
  HinGraph graph;
  std::vector<std::pair<std::string, std::string>> labels;  // user -> career, sorted by user
  std::unordered_map<std::string, std::vector<std::string>> item_texts;
};

// Occupations dropped from MovieLens-1M because they are not recommendable
// careers. The published user count (4,920 of 6,040) pins this exact list.
const std::vector<std::string>& default_removed_careers();

// Loads users.dat / movies.dat / ratings.dat ("::"-separated). Users whose
// occupation is in removed_careers are dropped with their ratings; every
// remaining rating becomes one like edge regardless of its value; movies
// with no remaining rating are dropped; occupation becomes the career label
// and titles are tokenized (lowercase alphanumeric runs).
DatasetBundle load_movielens(const std::string& dir,
                             const std::vector<std::string>& removed_careers =
                                 default_removed_careers());

// Desk-scale generator with a planted bias knob. Careers get a fixed gender
// composition; each user draws `likes_per_user` distinct items, each from
// the user's (career, gender)-stereotyped item pool with probability beta
// and from the full catalog otherwise. beta=0 is statistically fair, beta=1
// maximally confounded.
struct SyntheticSpec {
  std::vector<std::array<int, 2>> users_per_career_group;  // [career][group]
  int num_items = 200;
  double beta = 0.5;
  int likes_per_user = 20;
  std::uint64_t seed = 0;
};

DatasetBundle generate_synthetic(const SyntheticSpec& spec);

// Canonical on-disk layout: nodes.tsv, edges.tsv, labels.tsv (user<TAB>career),
// item_texts.tsv (item<TAB>space-joined tokens, possibly empty).
void save_dataset_dir(const std::string& dir, const DatasetBundle& bundle);
DatasetBundle load_dataset_dir(const std::string& dir);

std::vector<std::pair<std::string, std::string>> read_labels_tsv(const std::string& path);
void write_labels_tsv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& labels);
std::unordered_map<std::string, std::vector<std::string>> read_item_texts_tsv(
    const std::string& path);
void write_item_texts_tsv(
    const std::string& path,
    const std::unordered_map<std::string, std::vector<std::string>>& texts);

/// Lowercase alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize_title(const std::string& text);

}  // namespace fairhin
