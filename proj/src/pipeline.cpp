#include "fairhin/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "fairhin/embedding.hpp"
#include "fairhin/features.hpp"
#include "fairhin/gnn.hpp"
#include "fairhin/metapath.hpp"
#include "fairhin/projection.hpp"
#include "fairhin/rng.hpp"
#include "fairhin/skipgram.hpp"

namespace fairhin {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

[[noreturn]] void stage_fail(const std::string& stage, const std::string& what) {
  throw std::runtime_error("pipeline stage '" + stage + "' failed: " + what);
}

struct MethodTraits {
  bool sampling = false;  // walk/embed/mlp family vs gnn family
  bool fair_walks = false;
  bool projection = false;
  bool balance = false;
  FairLossConfig::Mode gnn_mode = FairLossConfig::Mode::none;
};

MethodTraits method_traits(const std::string& method) {
  const auto& known = known_methods();
  if (std::find(known.begin(), known.end(), method) == known.end())
    fail("unknown method '" + method + "'");
  MethodTraits t;
  if (method == "gnn") {
    return t;
  } else if (method == "gnn-dp") {
    t.gnn_mode = FairLossConfig::Mode::dp;
    return t;
  } else if (method == "gnn-eo") {
    t.gnn_mode = FairLossConfig::Mode::eo;
    return t;
  }
  t.sampling = true;
  t.balance = method == "balance-data";
  t.fair_walks = method.find("+fair") != std::string::npos;
  t.projection = method.find("+proj") != std::string::npos;
  return t;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string params_string(const std::string& method, const PipelineConfig& cfg) {
  const MethodTraits t = method_traits(method);
  if (!t.sampling) return "lambda=" + format_double(cfg.lambda);
  std::string p = "walks=" + std::to_string(cfg.num_walks) +
                  ";len=" + std::to_string(cfg.walk_length);
  if (t.fair_walks) p += ";r=" + format_double(cfg.ratio);
  return p;
}

struct LabelIndex {
  std::map<std::string, std::string> career_of;
  std::vector<std::string> careers;  // sorted distinct
};

LabelIndex index_labels(const DatasetBundle& data) {
  LabelIndex idx;
  std::set<std::string> careers;
  for (const auto& [user, career] : data.labels) {
    if (!idx.career_of.emplace(user, career).second)
      fail("labels: user '" + user + "' has more than one career");
    careers.insert(career);
  }
  idx.careers.assign(careers.begin(), careers.end());
  return idx;
}

// The relation linking careers to users; its edges carry the ground truth
// and only embedding-train users may keep them in the embedding graph.
std::string career_relation(const HinGraph& g) {
  auto career = g.type_id("career");
  if (!career) fail("graph has no 'career' type");
  const RelationDecl* found = nullptr;
  for (const RelationDecl& rd : g.relations()) {
    bool links = (rd.src_type == *career && rd.dst_type == g.protected_type()) ||
                 (rd.dst_type == *career && rd.src_type == g.protected_type());
    if (!links) continue;
    if (found) fail("multiple relations connect career and user types");
    found = &rd;
  }
  if (!found) fail("no relation connects career and user types");
  return found->name;
}

HinGraph build_embed_graph(const DatasetBundle& data, const std::vector<std::string>& embed) {
  const HinGraph& g = data.graph;
  const std::string choose = career_relation(g);
  const std::set<std::string> embed_set(embed.begin(), embed.end());

  std::vector<NodeSpec> nodes;
  nodes.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::uint8_t grp = g.group_of(v);
    nodes.push_back({g.original_id(v), g.type_name(g.node_type(v)),
                     grp == kNoGroup ? std::string() : g.group_name(grp)});
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    const std::string& rel = g.relations()[e.rel].name;
    if (rel == choose) {
      const NodeId user = g.node_type(e.u) == g.protected_type() ? e.u : e.v;
      if (!embed_set.count(g.original_id(user))) continue;
    }
    edges.push_back({g.original_id(e.u), rel, g.original_id(e.v)});
  }
  return build_graph(nodes, edges, g.attribute_name());
}

std::unordered_map<std::string, std::string> node_type_map(const HinGraph& g) {
  std::unordered_map<std::string, std::string> types;
  types.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    types.emplace(g.original_id(v), g.type_name(g.node_type(v)));
  return types;
}

std::vector<std::string> group_members(const HinGraph& g, std::uint8_t grp) {
  std::vector<std::string> out;
  for (NodeId v : g.nodes_of_type(g.protected_type()))
    if (g.group_of(v) == grp) out.push_back(g.original_id(v));
  return out;
}

std::vector<std::pair<std::string, std::string>> pairs_for(
    const std::vector<std::string>& users, const LabelIndex& labels) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    auto it = labels.career_of.find(u);
    if (it == labels.career_of.end()) fail("user '" + u + "' has no career label");
    out.emplace_back(u, it->second);
  }
  return out;
}

// Walk corpora as token strings (original ids), both built-in meta-paths.
std::vector<std::vector<std::string>> sample_corpus(const HinGraph& g,
                                                    const SamplerConfig& scfg) {
  std::vector<std::vector<std::string>> corpus;
  for (const MetaPath& mp : builtin_metapaths(g)) {
    for (const Walk& w : generate_walks(g, mp, scfg)) {
      std::vector<std::string> toks;
      toks.reserve(w.size());
      for (NodeId v : w) toks.push_back(g.original_id(v));
      corpus.push_back(std::move(toks));
    }
  }
  return corpus;
}

void write_corpus(const std::string& path, const std::vector<std::vector<std::string>>& corpus) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "'");
  for (const auto& walk : corpus) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out << ' ';
      out << walk[i];
    }
    out << '\n';
  }
}

// Embeddings are trained once per seed: the embedding-train set is shared by
// all folds. Each stage round-trips through its artifact file when out_dir
// is set, so resuming from files cannot diverge from a fresh run.
EmbeddingTable embeddings_for_seed(const DatasetBundle& data, const PipelineConfig& cfg,
                                   const MethodTraits& traits, const SplitPlan& plan,
                                   std::uint64_t run_seed, const std::string& seed_dir) {
  const bool artifacts = !seed_dir.empty();
  const std::string walks_path = artifacts ? seed_dir + "/walks.txt" : "";
  const std::string emb_path =
      artifacts ? seed_dir + (traits.projection ? "/embeddings_raw.txt" : "/embeddings.txt") : "";
  const std::string proj_path = artifacts ? seed_dir + "/embeddings.txt" : "";

  if (artifacts && fs::exists(proj_path)) return load_embeddings(proj_path);

  std::vector<std::vector<std::string>> corpus;
  if (artifacts && fs::exists(walks_path)) {
    corpus = read_walks(walks_path);
  } else {
    HinGraph g_embed = build_embed_graph(data, plan.embed);
    if (traits.balance) g_embed = balance_data(g_embed, derive_seed(run_seed, "balance"));
    SamplerConfig scfg;
    scfg.num_walks_per_start = cfg.num_walks;
    scfg.walk_length = cfg.walk_length;
    scfg.fair_ratio = cfg.ratio;
    scfg.literal_r = cfg.literal_r;
    scfg.seed = derive_seed(run_seed, "sample");
    scfg.mode = traits.fair_walks ? SamplerConfig::Mode::fair : SamplerConfig::Mode::standard;
    try {
      corpus = sample_corpus(g_embed, scfg);
    } catch (const std::exception& e) {
      stage_fail("sample-walks", e.what());
    }
    if (artifacts) {
      write_corpus(walks_path, corpus);
      corpus = read_walks(walks_path);
    }
  }

  EmbeddingTable emb;
  if (artifacts && fs::exists(emb_path)) {
    emb = load_embeddings(emb_path);
  } else {
    SkipGramConfig sgcfg = cfg.skipgram;
    sgcfg.seed = derive_seed(run_seed, "embed");
    const auto types = node_type_map(data.graph);
    try {
      emb = train_skipgram(corpus, sgcfg, &types);
    } catch (const std::exception& e) {
      stage_fail("train-embed", e.what());
    }
    if (artifacts) {
      save_embeddings(emb_path, emb);
      emb = load_embeddings(emb_path);
    }
  }

  if (traits.projection) {
    const std::set<std::string> embed_set(plan.embed.begin(), plan.embed.end());
    auto fit = [&](std::uint8_t grp) {
      std::vector<std::string> out;
      for (const auto& id : group_members(data.graph, grp))
        if (embed_set.count(id)) out.push_back(id);
      return out;
    };
    const auto g0 = fit(0);
    const auto g1 = fit(1);
    std::vector<std::string> all_users;
    for (NodeId v : data.graph.nodes_of_type(data.graph.protected_type()))
      all_users.push_back(data.graph.original_id(v));
    try {
      debias_all(emb, g0, g1, all_users);
    } catch (const std::exception& e) {
      stage_fail("debias", e.what());
    }
    if (artifacts) {
      save_embeddings(proj_path, emb);
      emb = load_embeddings(proj_path);
    }
  }
  return emb;
}

std::vector<UserRanking> rank_users_mlp(const MlpRanker& ranker, const EmbeddingTable& emb,
                                        const std::vector<std::string>& users) {
  std::vector<UserRanking> out;
  out.reserve(users.size());
  for (const auto& u : users) out.emplace_back(u, predict_ranking(ranker, emb, u));
  return out;
}

std::vector<PredictionRecord> records_from_rankings(const std::vector<UserRanking>& rankings,
                                                    const DatasetBundle& data,
                                                    const LabelIndex& labels) {
  std::vector<PredictionRecord> records;
  records.reserve(rankings.size());
  for (const auto& [user, ranked] : rankings) {
    PredictionRecord r;
    r.user = user;
    r.group = data.graph.group_of(data.graph.node(user));
    r.truth = labels.career_of.at(user);
    r.ranking.reserve(ranked.size());
    for (const auto& rc : ranked) r.ranking.push_back(rc.career);
    records.push_back(std::move(r));
  }
  return records;
}

EvalReport make_report(const std::string& method, const std::string& params,
                       std::uint64_t run_seed, int fold,
                       const std::vector<PredictionRecord>& records) {
  EvalReport rep;
  rep.method = method;
  rep.params = params;
  rep.seed = run_seed;
  rep.split = fold;
  rep.mrr = mrr(records);
  rep.diff_dp = diff_dp(records);
  rep.diff_eo = diff_eo(records);
  return rep;
}

std::vector<UserRanking> gnn_rankings(const GnnModel& model, const HinGraph& g,
                                      const FeatureMatrix& X,
                                      const std::vector<std::string>& users) {
  std::vector<NodeId> ids;
  ids.reserve(users.size());
  for (const auto& u : users) ids.push_back(g.node(u));
  Eigen::MatrixXd P = gnn_forward(model, g, X, ids);

  std::vector<UserRanking> out;
  out.reserve(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    std::vector<int> order(model.num_classes());
    for (int k = 0; k < model.num_classes(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return P(static_cast<Eigen::Index>(i), a) > P(static_cast<Eigen::Index>(i), b);
    });
    std::vector<RankedCareer> ranked;
    ranked.reserve(order.size());
    for (int k : order)
      ranked.push_back({model.class_ids[k], P(static_cast<Eigen::Index>(i), k)});
    out.emplace_back(users[i], std::move(ranked));
  }
  return out;
}

GnnBatch gnn_batch(const HinGraph& g, const std::vector<std::string>& users,
                   const LabelIndex& labels) {
  GnnBatch b;
  std::unordered_map<std::string, int> class_index;
  for (std::size_t i = 0; i < labels.careers.size(); ++i)
    class_index.emplace(labels.careers[i], static_cast<int>(i));
  for (const auto& u : users) {
    const NodeId v = g.node(u);
    b.users.push_back(v);
    b.labels.push_back(class_index.at(labels.career_of.at(u)));
    b.groups.push_back(g.group_of(v));
  }
  return b;
}

}  // namespace

DatasetBundle load_for_config(const PipelineConfig& cfg) {
  std::string dir = cfg.data_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("FAIRHIN_DATA_DIR")) dir = env;
  }
  if (cfg.dataset_kind == "synth") return generate_synthetic(cfg.synth);
  if (dir.empty()) fail("load_for_config: no data directory (set dir= or FAIRHIN_DATA_DIR)");
  if (cfg.dataset_kind == "movielens") return load_movielens(dir);
  if (cfg.dataset_kind == "dir") return load_dataset_dir(dir);
  fail("load_for_config: unknown dataset kind '" + cfg.dataset_kind + "'");
}

std::vector<EvalReport> run_pipeline(const PipelineConfig& cfg) {
  return run_pipeline(load_for_config(cfg), cfg);
}

std::vector<EvalReport> run_pipeline(const DatasetBundle& data, const PipelineConfig& cfg) {
  const MethodTraits traits = method_traits(cfg.method);
  const LabelIndex labels = index_labels(data);
  const std::string params = params_string(cfg.method, cfg);
  const bool artifacts = cfg.write_artifacts && !cfg.out_dir.empty();

  SplitResult splits = nested_cv_split(data.labels, cfg.split_seed);
  if (artifacts) {
    fs::create_directories(cfg.out_dir);
    write_splits_json(cfg.out_dir + "/splits.json", splits);
    splits = read_splits_json(cfg.out_dir + "/splits.json");
  }

  std::vector<EvalReport> reports;

  if (traits.sampling) {
    for (int s = 0; s < cfg.num_seeds; ++s) {
      const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(s);
      std::string seed_dir;
      if (artifacts) {
        seed_dir = cfg.out_dir + "/seed" + std::to_string(s);
        fs::create_directories(seed_dir);
      }
      const EmbeddingTable emb =
          embeddings_for_seed(data, cfg, traits, splits.plans.front(), run_seed, seed_dir);

      for (std::size_t fold = 0; fold < splits.plans.size(); ++fold) {
        const SplitPlan& plan = splits.plans[fold];
        std::string fold_dir;
        if (artifacts) {
          fold_dir = seed_dir + "/fold" + std::to_string(fold);
          fs::create_directories(fold_dir);
        }

        MlpConfig mcfg = cfg.mlp;
        mcfg.seed = derive_seed(run_seed, "mlp", {fold});
        MlpRanker ranker;
        const std::string model_path = artifacts ? fold_dir + "/mlp.model" : "";
        if (artifacts && fs::exists(model_path)) {
          ranker = load_mlp_model(model_path);
        } else {
          try {
            ranker = train_mlp(emb, pairs_for(plan.train, labels), pairs_for(plan.val, labels),
                               labels.careers, mcfg)
                         .model;
          } catch (const std::exception& e) {
            stage_fail("train-mlp", e.what());
          }
          if (artifacts) {
            save_mlp_model(model_path, ranker);
            ranker = load_mlp_model(model_path);
          }
        }

        std::vector<UserRanking> rankings;
        try {
          rankings = rank_users_mlp(ranker, emb, plan.test);
        } catch (const std::exception& e) {
          stage_fail("predict", e.what());
        }
        if (artifacts) {
          write_rankings_tsv(fold_dir + "/rankings.tsv", rankings);
          rankings = read_rankings_tsv(fold_dir + "/rankings.tsv");
        }
        reports.push_back(make_report(cfg.method, params, run_seed, static_cast<int>(fold),
                                      records_from_rankings(rankings, data, labels)));
      }
    }
  } else {
    FeatureMatrix X;
    try {
      X = build_features(data.graph, data.item_texts, cfg.feature_dim);
    } catch (const std::exception& e) {
      stage_fail("features", e.what());
    }
    if (artifacts) {
      save_features(cfg.out_dir + "/features.tsv", data.graph, X);
      X = load_features(cfg.out_dir + "/features.tsv", data.graph);
    }

    FairLossConfig fair;
    fair.mode = traits.gnn_mode;
    fair.lambda = traits.gnn_mode == FairLossConfig::Mode::none ? 0.0 : cfg.lambda;

    for (int s = 0; s < cfg.num_seeds; ++s) {
      const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(s);
      for (std::size_t fold = 0; fold < splits.plans.size(); ++fold) {
        const SplitPlan& plan = splits.plans[fold];
        std::string fold_dir;
        if (artifacts) {
          fold_dir = cfg.out_dir + "/seed" + std::to_string(s) + "/fold" + std::to_string(fold);
          fs::create_directories(fold_dir);
        }

        // GNNs need no embedding-train data: those users join the training
        // pool, giving the 7:1:2 career-prediction proportions.
        std::vector<std::string> train_users = plan.embed;
        train_users.insert(train_users.end(), plan.train.begin(), plan.train.end());
        std::sort(train_users.begin(), train_users.end());

        GnnConfig gcfg = cfg.gnn;
        gcfg.seed = derive_seed(run_seed, "gnn", {fold});
        GnnModel model;
        const std::string model_path = artifacts ? fold_dir + "/gnn.model" : "";
        if (artifacts && fs::exists(model_path)) {
          model = load_gnn_model(model_path);
        } else {
          try {
            model = train_gnn(data.graph, X, labels.careers, gnn_batch(data.graph, train_users, labels),
                              gnn_batch(data.graph, plan.val, labels), fair, gcfg)
                        .model;
          } catch (const std::exception& e) {
            stage_fail("train-gnn", e.what());
          }
          if (artifacts) {
            save_gnn_model(model_path, model);
            model = load_gnn_model(model_path);
          }
        }

        std::vector<UserRanking> rankings;
        try {
          rankings = gnn_rankings(model, data.graph, X, plan.test);
        } catch (const std::exception& e) {
          stage_fail("predict", e.what());
        }
        if (artifacts) write_rankings_tsv(fold_dir + "/rankings.tsv", rankings);
        reports.push_back(make_report(cfg.method, params, run_seed, static_cast<int>(fold),
                                      records_from_rankings(rankings, data, labels)));
      }
    }
  }

  if (artifacts) write_reports_csv(cfg.out_dir + "/reports.csv", reports);
  return reports;
}

std::vector<EvalReport> run_sweep(const DatasetBundle& data, const SweepConfig& cfg) {
  std::vector<PipelineConfig> cells;
  for (const std::string& method : cfg.methods) {
    const MethodTraits traits = method_traits(method);
    PipelineConfig cell = cfg.base;
    cell.method = method;
    if (traits.sampling) {
      for (int nw : cfg.num_walks_grid) {
        for (int wl : cfg.walk_length_grid) {
          cell.num_walks = nw;
          cell.walk_length = wl;
          if (traits.fair_walks) {
            for (double r : cfg.ratio_grid) {
              cell.ratio = r;
              cells.push_back(cell);
            }
          } else {
            cells.push_back(cell);
          }
        }
      }
    } else if (traits.gnn_mode == FairLossConfig::Mode::none) {
      cell.lambda = 0.0;
      cells.push_back(cell);
    } else {
      for (double l : cfg.lambda_grid) {
        cell.lambda = l;
        cells.push_back(cell);
      }
    }
  }

  // Each cell gets its own artifact directory named after its parameters.
  for (auto& cell : cells) {
    if (cell.out_dir.empty()) continue;
    std::string slug = params_string(cell.method, cell);
    for (char& c : slug)
      if (c == ';' || c == '=') c = '_';
    cell.out_dir += "/" + cell.method + "/" + slug;
  }

  std::vector<std::vector<EvalReport>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_pipeline(data, cells[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::vector<EvalReport> reports;
  for (const auto& r : results) reports.insert(reports.end(), r.begin(), r.end());
  if (!cfg.base.out_dir.empty()) {
    fs::create_directories(cfg.base.out_dir);
    write_reports_csv(cfg.base.out_dir + "/reports.csv", reports);
  }
  return reports;
}

void write_rankings_tsv(const std::string& path, std::span<const UserRanking> rankings) {
  std::ofstream out(path);
  if (!out) fail("write_rankings_tsv: cannot open '" + path + "'");
  char buf[64];
  for (const auto& [user, ranked] : rankings) {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g", ranked[i].prob);
      out << user << '\t' << i + 1 << '\t' << ranked[i].career << '\t' << buf << '\n';
    }
  }
}

std::vector<UserRanking> read_rankings_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_rankings_tsv: cannot open '" + path + "'");
  std::vector<UserRanking> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        f.push_back(line.substr(start));
        break;
      }
      f.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (f.size() != 4)
      fail("read_rankings_tsv: " + path + ":" + std::to_string(lineno) + ": expected 4 fields");
    const std::size_t rank = std::stoull(f[1]);
    if (out.empty() || out.back().first != f[0]) {
      if (rank != 1)
        fail("read_rankings_tsv: " + path + ":" + std::to_string(lineno) +
             ": rankings of a user must start at rank 1");
      out.emplace_back(f[0], std::vector<RankedCareer>{});
    }
    if (rank != out.back().second.size() + 1)
      fail("read_rankings_tsv: " + path + ":" + std::to_string(lineno) + ": rank out of order");
    out.back().second.push_back({f[2], std::stod(f[3])});
  }
  return out;
}

void write_splits_json(const std::string& path, const SplitResult& splits) {
  nlohmann::json j;
  j["stratified"] = splits.stratified;
  j["warnings"] = splits.warnings;
  j["embed"] = splits.plans.empty() ? std::vector<std::string>{} : splits.plans.front().embed;
  j["folds"] = nlohmann::json::array();
  for (const auto& plan : splits.plans)
    j["folds"].push_back({{"train", plan.train}, {"val", plan.val}, {"test", plan.test}});
  std::ofstream out(path);
  if (!out) fail("write_splits_json: cannot open '" + path + "'");
  out << j.dump(2) << '\n';
}

SplitResult read_splits_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_splits_json: cannot open '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  SplitResult res;
  res.stratified = j.at("stratified").get<bool>();
  res.warnings = j.at("warnings").get<std::vector<std::string>>();
  const auto embed = j.at("embed").get<std::vector<std::string>>();
  for (const auto& fold : j.at("folds")) {
    SplitPlan plan;
    plan.embed = embed;
    plan.train = fold.at("train").get<std::vector<std::string>>();
    plan.val = fold.at("val").get<std::vector<std::string>>();
    plan.test = fold.at("test").get<std::vector<std::string>>();
    res.plans.push_back(std::move(plan));
  }
  return res;
}

std::unordered_map<std::string, std::string> read_groups_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("read_groups_tsv: cannot open '" + path + "'");
  std::unordered_map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      fail("read_groups_tsv: " + path + ":" + std::to_string(lineno) + ": expected id<TAB>group");
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

}  // namespace fairhin
