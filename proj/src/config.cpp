#include "fairhin/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairhin {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Section {
  const std::map<std::string, std::string>* kv = nullptr;

  bool has(const std::string& key) const { return kv && kv->count(key); }
  std::string str(const std::string& key, const std::string& dflt) const {
    return has(key) ? kv->at(key) : dflt;
  }
  int geti(const std::string& key, int dflt) const {
    return has(key) ? std::stoi(kv->at(key)) : dflt;
  }
  double getd(const std::string& key, double dflt) const {
    return has(key) ? std::stod(kv->at(key)) : dflt;
  }
  std::uint64_t getu(const std::string& key, std::uint64_t dflt) const {
    return has(key) ? std::stoull(kv->at(key)) : dflt;
  }
  bool getb(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string& v = kv->at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("config: boolean key '" + key + "' has value '" + v + "'");
  }
};

Section section(const IniFile& ini, const std::string& name) {
  auto it = ini.find(name);
  return {it == ini.end() ? nullptr : &it->second};
}

}  // namespace

IniFile parse_ini_text(const std::string& text) {
  IniFile ini;
  std::string current;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("config line " + std::to_string(lineno) + ": bad section");
      current = trim(line.substr(1, line.size() - 2));
      ini[current];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail("config line " + std::to_string(lineno) + ": expected key = value");
    ini[current][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return ini;
}

IniFile parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ini_text(ss.str());
}

PipelineConfig pipeline_config_from_ini(const IniFile& ini) {
  PipelineConfig cfg;

  Section ds = section(ini, "dataset");
  cfg.dataset_kind = ds.str("kind", cfg.dataset_kind);
  cfg.data_dir = ds.str("dir", cfg.data_dir);
  if (cfg.dataset_kind == "synth") {
    const int careers = ds.geti("careers", 4);
    auto g0 = split_list(ds.str("g0_per_career", ""));
    auto g1 = split_list(ds.str("g1_per_career", ""));
    if (g0.empty()) g0.assign(careers, "25");
    if (g1.empty()) g1.assign(careers, "25");
    if (static_cast<int>(g0.size()) != careers || static_cast<int>(g1.size()) != careers)
      fail("config: g0_per_career/g1_per_career must list one count per career");
    cfg.synth.users_per_career_group.clear();
    for (int c = 0; c < careers; ++c)
      cfg.synth.users_per_career_group.push_back({std::stoi(g0[c]), std::stoi(g1[c])});
    cfg.synth.num_items = ds.geti("items", cfg.synth.num_items);
    cfg.synth.beta = ds.getd("beta", cfg.synth.beta);
    cfg.synth.likes_per_user = ds.geti("likes_per_user", cfg.synth.likes_per_user);
    cfg.synth.seed = ds.getu("synth_seed", cfg.synth.seed);
  }

  Section proto = section(ini, "protocol");
  cfg.split_seed = proto.getu("split_seed", cfg.split_seed);
  cfg.num_seeds = proto.geti("num_seeds", cfg.num_seeds);
  cfg.base_seed = proto.getu("base_seed", cfg.base_seed);

  Section run = section(ini, "run");
  cfg.method = run.str("method", cfg.method);
  cfg.out_dir = run.str("out_dir", cfg.out_dir);
  cfg.write_artifacts = run.getb("write_artifacts", cfg.write_artifacts);

  Section sampler = section(ini, "sampler");
  cfg.num_walks = sampler.geti("num_walks", cfg.num_walks);
  cfg.walk_length = sampler.geti("walk_length", cfg.walk_length);
  cfg.ratio = sampler.getd("ratio", cfg.ratio);
  cfg.literal_r = sampler.getb("literal_r", cfg.literal_r);

  Section sg = section(ini, "skipgram");
  cfg.skipgram.dim = sg.geti("dim", cfg.skipgram.dim);
  cfg.skipgram.negatives = sg.geti("negatives", cfg.skipgram.negatives);
  cfg.skipgram.window = sg.geti("window", cfg.skipgram.window);
  cfg.skipgram.epochs = sg.geti("epochs", cfg.skipgram.epochs);
  cfg.skipgram.alpha0 = sg.getd("alpha0", cfg.skipgram.alpha0);
  cfg.skipgram.alpha_floor = sg.getd("alpha_floor", cfg.skipgram.alpha_floor);

  Section mlp = section(ini, "mlp");
  cfg.mlp.hidden = mlp.geti("hidden", cfg.mlp.hidden);
  cfg.mlp.lr = mlp.getd("lr", cfg.mlp.lr);
  cfg.mlp.epochs = mlp.geti("epochs", cfg.mlp.epochs);
  cfg.mlp.patience = mlp.geti("patience", cfg.mlp.patience);

  Section gnn = section(ini, "gnn");
  cfg.gnn.hidden = gnn.geti("hidden", cfg.gnn.hidden);
  cfg.gnn.lr = gnn.getd("lr", cfg.gnn.lr);
  cfg.gnn.epochs = gnn.geti("epochs", cfg.gnn.epochs);
  cfg.gnn.patience = gnn.geti("patience", cfg.gnn.patience);
  const std::string act = gnn.str("activation", "relu");
  if (act == "relu")
    cfg.gnn.act = Activation::relu;
  else if (act == "tanh")
    cfg.gnn.act = Activation::tanh;
  else
    fail("config: unknown activation '" + act + "'");
  cfg.feature_dim = gnn.geti("feature_dim", cfg.feature_dim);
  cfg.lambda = gnn.getd("lambda", cfg.lambda);

  return cfg;
}

SweepConfig sweep_config_from_ini(const IniFile& ini) {
  SweepConfig sc;
  sc.base = pipeline_config_from_ini(ini);

  Section sw = section(ini, "sweep");
  if (!sw.kv) fail("config: sweep requires a [sweep] section");
  sc.methods = split_list(sw.str("methods", ""));
  if (sc.methods.empty()) fail("config: [sweep] methods is empty");
  for (const auto& v : split_list(sw.str("num_walks", ""))) sc.num_walks_grid.push_back(std::stoi(v));
  for (const auto& v : split_list(sw.str("walk_lengths", ""))) sc.walk_length_grid.push_back(std::stoi(v));
  for (const auto& v : split_list(sw.str("ratios", ""))) sc.ratio_grid.push_back(std::stod(v));
  for (const auto& v : split_list(sw.str("lambdas", ""))) sc.lambda_grid.push_back(std::stod(v));
  if (sc.num_walks_grid.empty()) sc.num_walks_grid = {sc.base.num_walks};
  if (sc.walk_length_grid.empty()) sc.walk_length_grid = {sc.base.walk_length};
  if (sc.ratio_grid.empty()) sc.ratio_grid = {sc.base.ratio};
  if (sc.lambda_grid.empty()) sc.lambda_grid = {sc.base.lambda};
  sc.jobs = sw.geti("jobs", 1);
  return sc;
}

}  // namespace fairhin
