#include "fairhin/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "fairhin/rng.hpp"

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

// MovieLens-1M occupation codes.
const std::array<const char*, 21> kOccupations = {
    "other or not specified", "academic/educator",    "artist",
    "clerical/admin",         "college/grad student", "customer service",
    "doctor/health care",     "executive/managerial", "farmer",
    "homemaker",              "K-12 student",         "lawyer",
    "programmer",             "retired",              "sales/marketing",
    "scientist",              "self-employed",        "technician/engineer",
    "tradesman/craftsman",    "unemployed",           "writer"};

std::vector<std::string> split_double_colon(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find("::", start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 2;
  }
  return fields;
}

std::vector<std::vector<std::string>> read_dat(const std::string& path, std::size_t cols,
                                               const char* what) {
  std::ifstream in(path);
  if (!in) fail(std::string(what) + ": missing file '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_double_colon(line);
    if (fields.size() != cols)
      fail(std::string(what) + ": " + path + ":" + std::to_string(lineno) + ": expected " +
           std::to_string(cols) + " '::'-separated fields, got " +
           std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(std::string(what) + ": bad integer '" + s + "'");
  }
}

}  // namespace

std::vector<std::string> tokenize_title(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

const std::vector<std::string>& default_removed_careers() {
  static const std::vector<std::string> list = {"other or not specified", "K-12 student",
                                                "retired", "unemployed"};
  return list;
}

DatasetBundle load_movielens(const std::string& dir,
                             const std::vector<std::string>& removed_careers) {
  namespace fs = std::filesystem;
  const std::set<std::string> removed(removed_careers.begin(), removed_careers.end());
  for (const auto& r : removed) {
    if (std::find(kOccupations.begin(), kOccupations.end(), r) == kOccupations.end())
      fail("load_movielens: '" + r + "' is not a MovieLens occupation");
  }

  // users.dat: UserID::Gender::Age::Occupation::Zip-code
  struct UserRow {
    std::string gender;
    int occupation;
  };
  std::map<int, UserRow> users;
  for (const auto& f : read_dat((fs::path(dir) / "users.dat").string(), 5, "users.dat")) {
    const int id = parse_int(f[0], "users.dat user id");
    if (f[1] != "M" && f[1] != "F") fail("users.dat: gender of user " + f[0] + " is not M/F");
    const int occ = parse_int(f[3], "users.dat occupation");
    if (occ < 0 || occ >= static_cast<int>(kOccupations.size()))
      fail("users.dat: unknown occupation code " + f[3]);
    if (!users.emplace(id, UserRow{f[1], occ}).second)
      fail("users.dat: duplicate user id " + f[0]);
  }

  // movies.dat: MovieID::Title::Genres
  std::map<int, std::string> movie_titles;
  for (const auto& f : read_dat((fs::path(dir) / "movies.dat").string(), 3, "movies.dat")) {
    const int id = parse_int(f[0], "movies.dat movie id");
    if (!movie_titles.emplace(id, f[1]).second) fail("movies.dat: duplicate movie id " + f[0]);
  }

  std::map<int, UserRow> kept;
  for (const auto& [id, row] : users)
    if (!removed.count(kOccupations[row.occupation])) kept.emplace(id, row);

  // ratings.dat: UserID::MovieID::Rating::Timestamp. The rating value is
  // ignored: any rating is one like edge.
  std::set<std::pair<int, int>> like_edges;
  for (const auto& f :
       read_dat((fs::path(dir) / "ratings.dat").string(), 4, "ratings.dat")) {
    const int uid = parse_int(f[0], "ratings.dat user id");
    const int mid = parse_int(f[1], "ratings.dat movie id");
    if (!users.count(uid)) fail("ratings.dat: rating references unknown user " + f[0]);
    if (!movie_titles.count(mid)) fail("ratings.dat: rating references unknown movie " + f[1]);
    if (!kept.count(uid)) continue;
    like_edges.emplace(uid, mid);
  }

  std::set<int> kept_movies;
  for (const auto& [uid, mid] : like_edges) kept_movies.insert(mid);
  std::set<int> kept_careers;
  for (const auto& [id, row] : kept) kept_careers.insert(row.occupation);

  DatasetBundle bundle;
  std::vector<NodeSpec> nodes;
  for (const auto& [id, row] : kept)
    nodes.push_back({"u" + std::to_string(id), "user", row.gender});
  for (int mid : kept_movies) nodes.push_back({"m" + std::to_string(mid), "item", ""});
  for (int occ : kept_careers) nodes.push_back({"c" + std::to_string(occ), "career", ""});

  std::vector<EdgeSpec> edges;
  for (const auto& [uid, mid] : like_edges)
    edges.push_back({"u" + std::to_string(uid), "like", "m" + std::to_string(mid)});
  for (const auto& [id, row] : kept)
    edges.push_back(
        {"u" + std::to_string(id), "choose", "c" + std::to_string(row.occupation)});

  bundle.graph = build_graph(nodes, edges, "gender");
  for (const auto& [id, row] : kept)
    bundle.labels.emplace_back("u" + std::to_string(id), "c" + std::to_string(row.occupation));
  for (int mid : kept_movies)
    bundle.item_texts.emplace("m" + std::to_string(mid), tokenize_title(movie_titles.at(mid)));
  return bundle;
}

DatasetBundle generate_synthetic(const SyntheticSpec& spec) {
  if (spec.users_per_career_group.empty()) fail("generate_synthetic: no careers");
  if (spec.num_items <= 0 || spec.likes_per_user <= 0)
    fail("generate_synthetic: counts must be positive");
  if (spec.beta < 0.0 || spec.beta > 1.0) fail("generate_synthetic: beta must be in [0, 1]");
  const int K = static_cast<int>(spec.users_per_career_group.size());
  if (spec.num_items < spec.likes_per_user)
    fail("generate_synthetic: need at least likes_per_user items");

  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  DatasetBundle bundle;

  for (int c = 0; c < K; ++c) nodes.push_back({"c" + std::to_string(c), "career", ""});
  for (int i = 0; i < spec.num_items; ++i) {
    const std::string id = "i" + std::to_string(i);
    nodes.push_back({id, "item", ""});
    const int pool = i % (2 * K);
    bundle.item_texts.emplace(
        id, std::vector<std::string>{"pool" + std::to_string(pool),
                                     "w" + std::to_string(i % 7), "item" + std::to_string(i)});
  }

  // pool(c, g) = items with index = 2c+g (mod 2K)
  auto pool_items = [&](int c, int g) {
    std::vector<int> items;
    for (int i = 2 * c + g; i < spec.num_items; i += 2 * K) items.push_back(i);
    return items;
  };

  int user_seq = 0;
  for (int c = 0; c < K; ++c) {
    for (int g = 0; g < 2; ++g) {
      const int count = spec.users_per_career_group[c][g];
      if (count < 0) fail("generate_synthetic: negative user count");
      for (int u = 0; u < count; ++u) {
        const std::string uid = "u" + std::to_string(user_seq);
        nodes.push_back({uid, "user", g == 0 ? "g0" : "g1"});
        edges.push_back({uid, "choose", "c" + std::to_string(c)});
        bundle.labels.emplace_back(uid, "c" + std::to_string(c));

        Rng rng(derive_seed(spec.seed, "likes", {static_cast<std::uint64_t>(user_seq)}));
        const std::vector<int> pool = pool_items(c, g);
        std::set<int> liked;
        int attempts = 0;
        while (static_cast<int>(liked.size()) < spec.likes_per_user &&
               attempts < 200 * spec.likes_per_user) {
          ++attempts;
          int item;
          if (rng.u01() < spec.beta && !pool.empty())
            item = pool[rng.index(pool.size())];
          else
            item = static_cast<int>(rng.index(spec.num_items));
          liked.insert(item);
        }
        // stereotyped pool exhausted by duplicates: top up deterministically
        for (int i = 0; static_cast<int>(liked.size()) < spec.likes_per_user; ++i)
          liked.insert(i % spec.num_items);
        for (int item : liked) edges.push_back({uid, "like", "i" + std::to_string(item)});
        ++user_seq;
      }
    }
  }
  if (user_seq == 0) fail("generate_synthetic: zero users");

  bundle.graph = build_graph(nodes, edges, "gender");
  std::sort(bundle.labels.begin(), bundle.labels.end());
  return bundle;
}

void save_dataset_dir(const std::string& dir, const DatasetBundle& bundle) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_node_tsv((fs::path(dir) / "nodes.tsv").string(), bundle.graph);
  write_edge_tsv((fs::path(dir) / "edges.tsv").string(), bundle.graph);
  write_labels_tsv((fs::path(dir) / "labels.tsv").string(), bundle.labels);
  write_item_texts_tsv((fs::path(dir) / "item_texts.tsv").string(), bundle.item_texts);
}

DatasetBundle load_dataset_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  DatasetBundle bundle;
  bundle.graph = load_graph_tsv((fs::path(dir) / "nodes.tsv").string(),
                                (fs::path(dir) / "edges.tsv").string());
  bundle.labels = read_labels_tsv((fs::path(dir) / "labels.tsv").string());
  bundle.item_texts = read_item_texts_tsv((fs::path(dir) / "item_texts.tsv").string());

  // Labels must match the graph's choose edges: one career per user.
  std::set<std::string> users;
  for (const auto& [user, career] : bundle.labels) {
    if (!bundle.graph.find_node(user)) fail("load_dataset_dir: label user '" + user + "' unknown");
    if (!bundle.graph.find_node(career))
      fail("load_dataset_dir: label career '" + career + "' unknown");
    if (!users.insert(user).second)
      fail("load_dataset_dir: user '" + user + "' has more than one career label");
  }
  return bundle;
}

std::vector<std::pair<std::string, std::string>> read_labels_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_labels_tsv: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      fail("read_labels_tsv: " + path + ":" + std::to_string(lineno) +
           ": expected user<TAB>career");
    std::string user = line.substr(0, tab);
    if (!seen.insert(user).second)
      fail("read_labels_tsv: user '" + user + "' has more than one career (line " +
           std::to_string(lineno) + ")");
    out.emplace_back(std::move(user), line.substr(tab + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_labels_tsv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& labels) {
  std::ofstream out(path);
  if (!out) fail("write_labels_tsv: cannot open '" + path + "'");
  for (const auto& [user, career] : labels) out << user << '\t' << career << '\n';
}

std::unordered_map<std::string, std::vector<std::string>> read_item_texts_tsv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_item_texts_tsv: cannot open '" + path + "'");
  std::unordered_map<std::string, std::vector<std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail("read_item_texts_tsv: " + path + ":" + std::to_string(lineno) +
           ": expected item<TAB>tokens");
    std::vector<std::string> tokens;
    std::string tok;
    for (std::size_t i = tab + 1; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ' ') {
        if (!tok.empty()) tokens.push_back(std::move(tok));
        tok.clear();
      } else {
        tok.push_back(line[i]);
      }
    }
    out.emplace(line.substr(0, tab), std::move(tokens));
  }
  return out;
}

void write_item_texts_tsv(
    const std::string& path,
    const std::unordered_map<std::string, std::vector<std::string>>& texts) {
  std::ofstream out(path);
  if (!out) fail("write_item_texts_tsv: cannot open '" + path + "'");
  std::vector<std::string> ids;
  ids.reserve(texts.size());
  for (const auto& [id, tokens] : texts) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    out << id << '\t';
    const auto& tokens = texts.at(id);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out << ' ';
      out << tokens[i];
    }
    out << '\n';
  }
}

}  // namespace fairhin
