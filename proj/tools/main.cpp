// fairhin command-line driver: dataset preparation, walk sampling, embedding
// and model training, prediction, and evaluation. Every subcommand exits 0
// only on full success.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "fairhin/config.hpp"
#include "fairhin/datasets.hpp"
#include "fairhin/embedding.hpp"
#include "fairhin/eval.hpp"
#include "fairhin/features.hpp"
#include "fairhin/gnn.hpp"
#include "fairhin/metapath.hpp"
#include "fairhin/mlp.hpp"
#include "fairhin/pipeline.hpp"
#include "fairhin/projection.hpp"
#include "fairhin/report.hpp"
#include "fairhin/rng.hpp"
#include "fairhin/skipgram.hpp"

namespace fs = std::filesystem;
using namespace fairhin;

namespace {

std::vector<std::string> read_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string data_dir_or_env(const std::string& dir) {
  if (!dir.empty()) return dir;
  if (const char* env = std::getenv("FAIRHIN_DATA_DIR")) return env;
  throw std::runtime_error("no data directory given (flag or FAIRHIN_DATA_DIR)");
}

void write_dataset_with_side_files(const DatasetBundle& bundle, const std::string& out_dir,
                                   int feature_dim, std::uint64_t splits_seed) {
  save_dataset_dir(out_dir, bundle);
  FeatureMatrix X = build_features(bundle.graph, bundle.item_texts, feature_dim);
  save_features(out_dir + "/features.tsv", bundle.graph, X);
  SplitResult splits = nested_cv_split(bundle.labels, splits_seed);
  write_splits_json(out_dir + "/splits.json", splits);
  for (const auto& w : splits.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "nodes=" << bundle.graph.num_nodes() << " edges=" << bundle.graph.num_edges()
            << " users=" << bundle.graph.nodes_of_type(bundle.graph.protected_type()).size()
            << " labeled=" << bundle.labels.size() << " -> " << out_dir << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"fair heterogeneous-information-network embeddings"};
  app.require_subcommand(1);

  // ---- load ----------------------------------------------------------
  auto* load = app.add_subcommand("load", "load MovieLens-1M into the canonical dataset layout");
  std::string load_dir, load_out = "data/movielens";
  std::uint64_t load_splits_seed = 1;
  int load_feature_dim = 50;
  load->add_option("--movielens", load_dir, "directory with users.dat/movies.dat/ratings.dat");
  load->add_option("--out-dir", load_out, "output dataset directory")->required();
  load->add_option("--splits-seed", load_splits_seed, "seed for splits.json");
  load->add_option("--feature-dim", load_feature_dim, "feature hashing dimension");
  load->callback([&] {
    DatasetBundle bundle = load_movielens(data_dir_or_env(load_dir));
    write_dataset_with_side_files(bundle, load_out, load_feature_dim, load_splits_seed);
  });

  // ---- synth ---------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic biased career network");
  std::string synth_out = "data/synth";
  std::string synth_g0 = "40,10,15,35", synth_g1 = "10,40,35,15";
  SyntheticSpec spec;
  std::uint64_t synth_splits_seed = 1;
  int synth_feature_dim = 50;
  synth->add_option("--g0-per-career", synth_g0, "comma list of group-0 counts per career");
  synth->add_option("--g1-per-career", synth_g1, "comma list of group-1 counts per career");
  synth->add_option("--items", spec.num_items, "item count");
  synth->add_option("--beta", spec.beta, "planted bias strength in [0,1]");
  synth->add_option("--likes", spec.likes_per_user, "likes per user");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--out-dir", synth_out, "output dataset directory")->required();
  synth->add_option("--splits-seed", synth_splits_seed, "seed for splits.json");
  synth->add_option("--feature-dim", synth_feature_dim, "feature hashing dimension");
  synth->callback([&] {
    auto parse_counts = [](const std::string& s) {
      std::vector<int> out;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
      return out;
    };
    const auto g0 = parse_counts(synth_g0);
    const auto g1 = parse_counts(synth_g1);
    if (g0.size() != g1.size() || g0.empty())
      throw std::runtime_error("--g0-per-career and --g1-per-career must have equal length");
    spec.users_per_career_group.clear();
    for (std::size_t c = 0; c < g0.size(); ++c)
      spec.users_per_career_group.push_back({g0[c], g1[c]});
    DatasetBundle bundle = generate_synthetic(spec);
    write_dataset_with_side_files(bundle, synth_out, synth_feature_dim, synth_splits_seed);
  });

  // ---- sample-walks --------------------------------------------------
  auto* sample = app.add_subcommand("sample-walks", "generate a meta-path walk corpus");
  std::string sw_graph, sw_metapath = "cuiuc", sw_mode = "standard", sw_out, sw_splits;
  SamplerConfig scfg;
  sample->add_option("--graph", sw_graph, "dataset directory")->required();
  sample->add_option("--metapath", sw_metapath, "cuiuc or uiu")
      ->check(CLI::IsMember({"cuiuc", "uiu"}));
  sample->add_option("--mode", sw_mode, "standard or fair")
      ->check(CLI::IsMember({"standard", "fair"}));
  sample->add_option("--num-walks", scfg.num_walks_per_start, "walks per start node");
  sample->add_option("--walk-length", scfg.walk_length, "meta-path repetitions per walk");
  sample->add_option("--ratio", scfg.fair_ratio, "fair up-sampling ratio r >= 1");
  sample->add_option("--seed", scfg.seed, "sampler seed");
  sample->add_flag("--literal-r", scfg.literal_r, "apply r to both groups (printed form)");
  sample->add_option("--splits", sw_splits,
                     "splits.json; restricts choose edges to the embedding-train users");
  sample->add_option("--out", sw_out, "walk corpus file")->required();
  sample->callback([&] {
    DatasetBundle bundle = load_dataset_dir(sw_graph);
    scfg.mode = sw_mode == "fair" ? SamplerConfig::Mode::fair : SamplerConfig::Mode::standard;
    const HinGraph* g = &bundle.graph;
    HinGraph filtered;
    if (!sw_splits.empty()) {
      SplitResult splits = read_splits_json(sw_splits);
      // rebuild with choose edges limited to the embedding-train users
      std::set<std::string> embed(splits.plans.front().embed.begin(),
                                  splits.plans.front().embed.end());
      std::vector<NodeSpec> nodes;
      for (NodeId v = 0; v < bundle.graph.num_nodes(); ++v) {
        const std::uint8_t grp = bundle.graph.group_of(v);
        nodes.push_back({bundle.graph.original_id(v),
                         bundle.graph.type_name(bundle.graph.node_type(v)),
                         grp == kNoGroup ? std::string() : bundle.graph.group_name(grp)});
      }
      auto career = bundle.graph.type_id("career");
      std::vector<EdgeSpec> edges;
      for (const Edge& e : bundle.graph.edges()) {
        const bool choose = career && (bundle.graph.node_type(e.u) == *career ||
                                       bundle.graph.node_type(e.v) == *career);
        if (choose) {
          const NodeId user =
              bundle.graph.node_type(e.u) == bundle.graph.protected_type() ? e.u : e.v;
          if (!embed.count(bundle.graph.original_id(user))) continue;
        }
        edges.push_back({bundle.graph.original_id(e.u), bundle.graph.relations()[e.rel].name,
                         bundle.graph.original_id(e.v)});
      }
      filtered = build_graph(nodes, edges, bundle.graph.attribute_name());
      g = &filtered;
    }
    for (const MetaPath& mp : builtin_metapaths(*g)) {
      if (mp.name != sw_metapath) continue;
      write_walks(sw_out, generate_walks(*g, mp, scfg), *g);
      std::cout << "wrote " << sw_out << '\n';
      return;
    }
    throw std::runtime_error("metapath '" + sw_metapath + "' not available");
  });

  // ---- train-embed ---------------------------------------------------
  auto* embed = app.add_subcommand("train-embed", "skip-gram training over a walk corpus");
  std::string te_walks, te_out, te_nodes;
  SkipGramConfig sgcfg;
  embed->add_option("--walks", te_walks, "walk corpus (one walk per line)")->required();
  embed->add_option("--dim", sgcfg.dim, "embedding dimension");
  embed->add_option("--negatives", sgcfg.negatives, "negative samples per pair");
  embed->add_option("--window", sgcfg.window, "context window");
  embed->add_option("--epochs", sgcfg.epochs, "training epochs");
  embed->add_option("--alpha", sgcfg.alpha0, "initial learning rate");
  embed->add_option("--seed", sgcfg.seed, "training seed");
  embed->add_option("--nodes", te_nodes, "node table; enables type-matched negatives");
  embed->add_option("--out", te_out, "embedding file")->required();
  embed->callback([&] {
    const auto corpus = read_walks(te_walks);
    EmbeddingTable table;
    if (te_nodes.empty()) {
      table = train_skipgram(corpus, sgcfg);
    } else {
      std::unordered_map<std::string, std::string> types;
      for (const NodeSpec& n : read_node_tsv(te_nodes)) types.emplace(n.id, n.type);
      table = train_skipgram(corpus, sgcfg, &types);
    }
    save_embeddings(te_out, table);
    std::cout << "wrote " << te_out << " (" << table.size() << " x " << table.dim << ")\n";
  });

  // ---- debias --------------------------------------------------------
  auto* deb = app.add_subcommand("debias", "orthogonal projection off the bias direction");
  std::string db_in, db_nodes, db_out, db_fit;
  deb->add_option("--embeddings", db_in, "input embedding file")->required();
  deb->add_option("--node-table", db_nodes, "node table with group labels")->required();
  deb->add_option("--out", db_out, "output embedding file")->required();
  deb->add_option("--fit-users", db_fit,
                  "ids whose vectors define the bias direction (default: all users in the table)");
  deb->callback([&] {
    EmbeddingTable emb = load_embeddings(db_in);
    std::vector<std::string> g0, g1, users;
    std::set<std::string> fit;
    if (!db_fit.empty())
      for (auto& id : read_id_list(db_fit)) fit.insert(id);
    std::set<std::string> group_names;
    std::vector<std::pair<std::string, std::string>> user_groups;
    for (const NodeSpec& n : read_node_tsv(db_nodes)) {
      if (n.group.empty()) continue;
      group_names.insert(n.group);
      user_groups.emplace_back(n.id, n.group);
    }
    if (group_names.size() != 2)
      throw std::runtime_error("node table must carry exactly two group labels");
    const std::string first = *group_names.begin();
    for (const auto& [id, grp] : user_groups) {
      users.push_back(id);
      if (!fit.empty() && !fit.count(id)) continue;
      if (!emb.contains(id)) continue;
      (grp == first ? g0 : g1).push_back(id);
    }
    DebiasOutcome outcome = debias_all(emb, g0, g1, users);
    save_embeddings(db_out, emb);
    std::cout << (outcome.applied ? "projected " : "unchanged ") << outcome.users_projected
              << " user vectors -> " << db_out << '\n';
  });

  // ---- train-gnn -----------------------------------------------------
  auto* tg = app.add_subcommand("train-gnn", "fairness-regularized GNN training");
  std::string tg_graph, tg_features, tg_labels, tg_fair = "none", tg_out, tg_splits;
  int tg_fold = 0;
  FairLossConfig tg_fair_cfg;
  GnnConfig gcfg;
  std::string tg_act = "relu";
  tg->add_option("--graph", tg_graph, "dataset directory")->required();
  tg->add_option("--features", tg_features, "feature file (features.tsv)")->required();
  tg->add_option("--labels", tg_labels, "labels.tsv")->required();
  tg->add_option("--fair", tg_fair, "none, dp or eo")->check(CLI::IsMember({"none", "dp", "eo"}));
  tg->add_option("--lambda", tg_fair_cfg.lambda, "fairness trade-off weight");
  tg->add_option("--lr", gcfg.lr, "learning rate");
  tg->add_option("--epochs", gcfg.epochs, "max epochs");
  tg->add_option("--patience", gcfg.patience, "early-stop patience");
  tg->add_option("--hidden", gcfg.hidden, "hidden width");
  tg->add_option("--activation", tg_act, "relu or tanh")->check(CLI::IsMember({"relu", "tanh"}));
  tg->add_option("--seed", gcfg.seed, "training seed");
  tg->add_option("--splits", tg_splits, "splits.json (default: seeded 90/10 train/val)");
  tg->add_option("--fold", tg_fold, "fold index within --splits");
  tg->add_option("--out", tg_out, "model file")->required();
  tg->callback([&] {
    DatasetBundle bundle = load_dataset_dir(tg_graph);
    bundle.labels = read_labels_tsv(tg_labels);
    FeatureMatrix X = load_features(tg_features, bundle.graph);
    gcfg.act = tg_act == "tanh" ? Activation::tanh : Activation::relu;
    tg_fair_cfg.mode = tg_fair == "dp"   ? FairLossConfig::Mode::dp
                       : tg_fair == "eo" ? FairLossConfig::Mode::eo
                                         : FairLossConfig::Mode::none;

    std::vector<std::string> train_users, val_users;
    if (!tg_splits.empty()) {
      SplitResult splits = read_splits_json(tg_splits);
      const SplitPlan& plan = splits.plans.at(tg_fold);
      train_users = plan.embed;
      train_users.insert(train_users.end(), plan.train.begin(), plan.train.end());
      std::sort(train_users.begin(), train_users.end());
      val_users = plan.val;
    } else {
      for (const auto& [user, career] : bundle.labels) train_users.push_back(user);
      Rng rng(derive_seed(gcfg.seed, "gnn-holdout"));
      rng.shuffle(train_users);
      const std::size_t n_val = std::max<std::size_t>(1, train_users.size() / 10);
      val_users.assign(train_users.begin(), train_users.begin() + n_val);
      train_users.erase(train_users.begin(), train_users.begin() + n_val);
      std::sort(train_users.begin(), train_users.end());
      std::sort(val_users.begin(), val_users.end());
    }

    std::map<std::string, std::string> career_of(bundle.labels.begin(), bundle.labels.end());
    std::set<std::string> careers;
    for (const auto& [user, career] : bundle.labels) careers.insert(career);
    std::vector<std::string> class_ids(careers.begin(), careers.end());
    std::unordered_map<std::string, int> class_index;
    for (std::size_t i = 0; i < class_ids.size(); ++i)
      class_index.emplace(class_ids[i], static_cast<int>(i));
    auto batch = [&](const std::vector<std::string>& users) {
      GnnBatch b;
      for (const auto& u : users) {
        const NodeId v = bundle.graph.node(u);
        b.users.push_back(v);
        b.labels.push_back(class_index.at(career_of.at(u)));
        b.groups.push_back(bundle.graph.group_of(v));
      }
      return b;
    };
    GnnTrainResult res = train_gnn(bundle.graph, X, class_ids, batch(train_users),
                                   batch(val_users), tg_fair_cfg, gcfg);
    save_gnn_model(tg_out, res.model);
    std::cout << "wrote " << tg_out << " (best val MRR " << res.best_val_mrr << " at epoch "
              << res.best_epoch << (res.diverged ? ", diverged" : "") << ")\n";
    if (res.diverged) throw std::runtime_error("training diverged");
  });

  // ---- train-mlp -----------------------------------------------------
  auto* tm = app.add_subcommand("train-mlp", "career ranker over user/career embeddings");
  std::string tm_emb, tm_labels, tm_splits, tm_out;
  int tm_fold = 0;
  MlpConfig mcfg;
  tm->add_option("--embeddings", tm_emb, "embedding file")->required();
  tm->add_option("--labels", tm_labels, "labels.tsv")->required();
  tm->add_option("--splits", tm_splits, "splits.json")->required();
  tm->add_option("--fold", tm_fold, "fold index");
  tm->add_option("--lr", mcfg.lr, "learning rate");
  tm->add_option("--epochs", mcfg.epochs, "max epochs");
  tm->add_option("--patience", mcfg.patience, "early-stop patience");
  tm->add_option("--hidden", mcfg.hidden, "hidden width");
  tm->add_option("--seed", mcfg.seed, "training seed");
  tm->add_option("--out", tm_out, "model file")->required();
  tm->callback([&] {
    EmbeddingTable emb = load_embeddings(tm_emb);
    const auto labels = read_labels_tsv(tm_labels);
    std::map<std::string, std::string> career_of(labels.begin(), labels.end());
    SplitResult splits = read_splits_json(tm_splits);
    const SplitPlan& plan = splits.plans.at(tm_fold);
    std::set<std::string> careers;
    for (const auto& [user, career] : labels) careers.insert(career);
    auto pairs = [&](const std::vector<std::string>& users) {
      std::vector<std::pair<std::string, std::string>> out;
      for (const auto& u : users) out.emplace_back(u, career_of.at(u));
      return out;
    };
    MlpTrainResult res =
        train_mlp(emb, pairs(plan.train), pairs(plan.val),
                  std::vector<std::string>(careers.begin(), careers.end()), mcfg);
    save_mlp_model(tm_out, res.model);
    std::cout << "wrote " << tm_out << " (best val MRR " << res.best_val_mrr << " at epoch "
              << res.best_epoch << ")\n";
  });

  // ---- predict -------------------------------------------------------
  auto* pr = app.add_subcommand("predict", "rank careers for a list of users");
  std::string pr_model, pr_emb, pr_users, pr_out;
  pr->add_option("--model", pr_model, "mlp model file")->required();
  pr->add_option("--embeddings", pr_emb, "embedding file")->required();
  pr->add_option("--users", pr_users, "file with one user id per line")->required();
  pr->add_option("--out", pr_out, "rankings TSV")->required();
  pr->callback([&] {
    MlpRanker model = load_mlp_model(pr_model);
    EmbeddingTable emb = load_embeddings(pr_emb);
    std::vector<UserRanking> rankings;
    for (const auto& user : read_id_list(pr_users))
      rankings.emplace_back(user, predict_ranking(model, emb, user));
    write_rankings_tsv(pr_out, rankings);
    std::cout << "wrote " << pr_out << " (" << rankings.size() << " users)\n";
  });

  // ---- evaluate ------------------------------------------------------
  auto* ev = app.add_subcommand("evaluate", "MRR and fairness gaps of a rankings file");
  std::string ev_rankings, ev_labels, ev_groups;
  ev->add_option("--rankings", ev_rankings, "rankings TSV")->required();
  ev->add_option("--labels", ev_labels, "labels.tsv")->required();
  ev->add_option("--groups", ev_groups, "user<TAB>group file")->required();
  ev->callback([&] {
    const auto rankings = read_rankings_tsv(ev_rankings);
    const auto labels = read_labels_tsv(ev_labels);
    std::map<std::string, std::string> career_of(labels.begin(), labels.end());
    const auto groups = read_groups_tsv(ev_groups);
    std::set<std::string> names;
    for (const auto& [id, grp] : groups) names.insert(grp);
    if (names.size() != 2) throw std::runtime_error("groups file must carry exactly two labels");
    const std::string first = *names.begin();
    std::vector<PredictionRecord> records;
    for (const auto& [user, ranked] : rankings) {
      PredictionRecord r;
      r.user = user;
      r.group = groups.at(user) == first ? 0 : 1;
      r.truth = career_of.at(user);
      for (const auto& rc : ranked) r.ranking.push_back(rc.career);
      records.push_back(std::move(r));
    }
    int skipped = 0;
    std::cout << "n=" << records.size() << " mrr=" << mrr(records)
              << " diff_dp=" << diff_dp(records) << " diff_eo=" << diff_eo(records, &skipped);
    if (skipped) std::cout << " (eo classes skipped: " << skipped << ")";
    std::cout << '\n';
  });

  // ---- sweep ---------------------------------------------------------
  auto* sw = app.add_subcommand("sweep", "full grid over methods and hyper-parameters");
  std::string sweep_cfg_path;
  sw->add_option("--config", sweep_cfg_path, "sweep config file")->required();
  sw->callback([&] {
    SweepConfig cfg = sweep_config_from_ini(parse_ini(sweep_cfg_path));
    DatasetBundle data = load_for_config(cfg.base);
    const auto reports = run_sweep(data, cfg);
    std::cout << reports.size() << " report rows";
    if (!cfg.base.out_dir.empty()) std::cout << " -> " << cfg.base.out_dir << "/reports.csv";
    std::cout << '\n';
  });

  // ---- report --------------------------------------------------------
  auto* rp = app.add_subcommand("report", "Pareto frontiers and LF/MF/HF threshold tables");
  std::string rp_dir, rp_baseline = "gnn", rp_out = "tables";
  rp->add_option("--reports", rp_dir, "directory with report CSVs")->required();
  rp->add_option("--baseline-method", rp_baseline, "method providing the fairness baseline");
  rp->add_option("--out", rp_out, "output directory")->required();
  rp->callback([&] {
    std::vector<EvalReport> reports;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(rp_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto rows = read_reports_csv(f.string());
      reports.insert(reports.end(), rows.begin(), rows.end());
    }
    if (reports.empty()) throw std::runtime_error("no report rows under '" + rp_dir + "'");
    write_report_tables(reports, rp_baseline, rp_out);
    std::cout << "wrote " << rp_out << "/tables.{json,txt} and pareto files ("
              << reports.size() << " rows)\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
