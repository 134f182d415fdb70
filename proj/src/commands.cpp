#include "grade/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "grade/bench.hpp"
#include "grade/checkpoint.hpp"
#include "grade/io.hpp"
#include "grade/metrics.hpp"
#include "grade/rng.hpp"
#include "grade/synth.hpp"
#include "grade/trainer.hpp"
#include "grade/wl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace grade {

namespace {

// ---- config plumbing -------------------------------------------------------

const std::set<std::string> kSubcommands = {"train-node", "train-rec", "kernel",
                                            "gsd",        "bench",     "synth"};

// Reads one subcommand section, tracking the keys it understands so anything
// unrecognized is an error instead of a silent no-op.
class SectionReader {
 public:
  SectionReader(const json& j, std::string name) : j_(j), name_(std::move(name)) {}

  template <typename T>
  T get(const std::string& key, T def) {
    known_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return def;
    return typed<T>(key);
  }

  template <typename T>
  std::optional<T> opt(const std::string& key) {
    known_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
    return typed<T>(key);
  }

  template <typename T>
  T require(const std::string& key) {
    known_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null())
      throw std::invalid_argument("config: section '" + name_ + "' is missing required key '" +
                                  key + "'");
    return typed<T>(key);
  }

  void done() const {
    for (const auto& item : j_.items())
      if (!known_.count(item.key()))
        throw std::invalid_argument("config: unknown key '" + item.key() + "' in section '" +
                                    name_ + "'");
  }

 private:
  template <typename T>
  T typed(const std::string& key) {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument("config: bad value type for '" + name_ + "." + key + "'");
    }
  }

  const json& j_;
  std::string name_;
  std::set<std::string> known_;
};

json load_config_file(const std::optional<std::string>& path) {
  if (!path) return json::object();
  std::ifstream in(*path);
  if (!in) throw std::runtime_error("cannot open config " + *path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + *path + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("config " + *path + ": top level must be an object");
  for (const auto& item : j.items())
    if (!kSubcommands.count(item.key()))
      throw std::runtime_error("config " + *path + ": unknown section '" + item.key() + "'");
  return j;
}

std::string resolve_path(const std::string& p) {
  return fs::absolute(fs::path(p)).lexically_normal().string();
}

BaseKind parse_base_kind(const std::string& s) {
  if (s == "mmd") return BaseKind::Mmd;
  if (s == "coral") return BaseKind::Coral;
  throw std::invalid_argument("unknown base '" + s + "' (expected mmd or coral)");
}

GsdVariant parse_variant(const std::string& s) {
  if (s == "plain") return GsdVariant::Plain;
  if (s == "degree") return GsdVariant::Degree;
  if (s == "label") return GsdVariant::Label;
  throw std::invalid_argument("unknown variant '" + s + "' (expected plain, degree or label)");
}

MmdEstimator parse_estimator(const std::string& s) {
  if (s == "biased") return MmdEstimator::Biased;
  if (s == "unbiased") return MmdEstimator::Unbiased;
  throw std::invalid_argument("unknown estimator '" + s + "' (expected biased or unbiased)");
}

// ---- output helpers --------------------------------------------------------

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_effective_config(const fs::path& out_dir, const std::string& section,
                            const json& effective) {
  json root;
  root[section] = effective;
  write_text(out_dir / "config.json", root.dump(2) + "\n");
}

std::string format_metrics(const std::vector<std::pair<std::string, double>>& metrics) {
  std::string s;
  char buf[128];
  for (const auto& [name, value] : metrics) {
    std::snprintf(buf, sizeof(buf), "%s\t%.6f\n", name.c_str(), value);
    s += buf;
  }
  return s;
}

std::string format_epoch_log(const std::vector<EpochStats>& history) {
  std::string s = "epoch\ttask";
  const size_t depths = history.empty() ? 0 : history.front().gsd_per_depth.size();
  for (size_t m = 0; m < depths; ++m) s += "\tgsd_" + std::to_string(m);
  s += "\ttotal\n";
  char buf[64];
  for (size_t e = 0; e < history.size(); ++e) {
    s += std::to_string(e + 1);
    std::snprintf(buf, sizeof(buf), "\t%.12g", history[e].task_loss);
    s += buf;
    for (double v : history[e].gsd_per_depth) {
      std::snprintf(buf, sizeof(buf), "\t%.12g", v);
      s += buf;
    }
    std::snprintf(buf, sizeof(buf), "\t%.12g\n", history[e].total);
    s += buf;
  }
  return s;
}

// Shared training knobs for train-node / train-rec / bench sections, with
// per-section fallbacks taken from `defaults`. Every key is read through the
// reader even when a flag overrides it; otherwise the unknown-key check
// would reject the key the flag shadows.
TrainConfig read_train_config(SectionReader& sec, const CliOverrides& ov,
                              const TrainConfig& defaults) {
  TrainConfig cfg = defaults;
  cfg.lambda = sec.get<double>("lambda", defaults.lambda);
  if (ov.lambda) cfg.lambda = *ov.lambda;
  cfg.epochs = sec.get<int>("epochs", defaults.epochs);
  cfg.learning_rate = sec.get<double>("learning_rate", defaults.learning_rate);
  cfg.depth = sec.get<int>("depth", defaults.depth);
  if (ov.depth) cfg.depth = *ov.depth;
  cfg.hidden = sec.get<int>("hidden", defaults.hidden);
  std::string base =
      sec.get<std::string>("base", defaults.base == BaseKind::Mmd ? "mmd" : "coral");
  if (ov.base) base = *ov.base;
  cfg.base = parse_base_kind(base);
  cfg.estimator = parse_estimator(sec.get<std::string>(
      "estimator", defaults.estimator == MmdEstimator::Biased ? "biased" : "unbiased"));
  const char* variant_default = defaults.variant == GsdVariant::Plain     ? "plain"
                                : defaults.variant == GsdVariant::Degree ? "degree"
                                                                         : "label";
  std::string variant = sec.get<std::string>("variant", variant_default);
  if (ov.variant) variant = *ov.variant;
  cfg.variant = parse_variant(variant);
  cfg.seed = sec.get<std::uint64_t>("seed", defaults.seed);
  if (ov.seed) cfg.seed = *ov.seed;
  cfg.max_degree = sec.get<int>("max_degree", defaults.max_degree);
  cfg.gsd_sample_cap = sec.get<int>("gsd_sample_cap", defaults.gsd_sample_cap);
  return cfg;
}

// "out" comes from the section or the --out flag; the flag wins.
fs::path resolve_out_dir(SectionReader& sec, const CliOverrides& ov, const char* section) {
  auto out = sec.opt<std::string>("out");
  if (ov.out) out = ov.out;
  if (!out)
    throw std::invalid_argument(std::string("config: section '") + section +
                                "' is missing required key 'out' (or pass --out)");
  return resolve_path(*out);
}

json train_config_echo(const TrainConfig& cfg) {
  json j;
  j["lambda"] = cfg.lambda;
  j["epochs"] = cfg.epochs;
  j["learning_rate"] = cfg.learning_rate;
  j["depth"] = cfg.depth;
  j["hidden"] = cfg.hidden;
  j["base"] = cfg.base == BaseKind::Mmd ? "mmd" : "coral";
  j["estimator"] = cfg.estimator == MmdEstimator::Biased ? "biased" : "unbiased";
  j["variant"] = cfg.variant == GsdVariant::Plain
                     ? "plain"
                     : (cfg.variant == GsdVariant::Degree ? "degree" : "label");
  j["seed"] = cfg.seed;
  j["max_degree"] = cfg.max_degree;
  j["gsd_sample_cap"] = cfg.gsd_sample_cap;
  return j;
}

// ---- train-node ------------------------------------------------------------

int run_train_node(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "train-node");

  const std::string source_edges = resolve_path(sec.require<std::string>("source_edges"));
  const std::string source_labels = resolve_path(sec.require<std::string>("source_labels"));
  const std::string target_edges = resolve_path(sec.require<std::string>("target_edges"));
  auto source_features = sec.opt<std::string>("source_features");
  auto target_features = sec.opt<std::string>("target_features");
  auto target_labels = sec.opt<std::string>("target_labels");
  if (source_features) source_features = resolve_path(*source_features);
  if (target_features) target_features = resolve_path(*target_features);
  if (target_labels) target_labels = resolve_path(*target_labels);

  const std::string label_mode_str = sec.get<std::string>("label_mode", "class");
  if (label_mode_str != "class" && label_mode_str != "regress")
    throw std::invalid_argument("train-node: label_mode must be 'class' or 'regress'");
  const LabelMode mode =
      label_mode_str == "class" ? LabelMode::ClassIndex : LabelMode::Real;

  TrainConfig cfg = read_train_config(sec, ov, TrainConfig{});
  cfg.regression = mode == LabelMode::Real;
  cfg.head_hidden = sec.get<std::vector<int>>("head_hidden", {});

  const fs::path out_dir = resolve_out_dir(sec, ov, "train-node");
  sec.done();

  json echo = train_config_echo(cfg);
  echo["source_edges"] = source_edges;
  if (source_features) echo["source_features"] = *source_features;
  echo["source_labels"] = source_labels;
  echo["target_edges"] = target_edges;
  if (target_features) echo["target_features"] = *target_features;
  if (target_labels) echo["target_labels"] = *target_labels;
  echo["label_mode"] = label_mode_str;
  echo["head_hidden"] = cfg.head_hidden;
  echo["out"] = out_dir.string();

  const Graph source =
      load_graph_csv(source_edges, source_features, source_labels, mode, cfg.max_degree);
  const Graph target =
      load_graph_csv(target_edges, target_features, target_labels, mode, cfg.max_degree);

  const TrainedModel model = train_grade_n(source, target, cfg);

  fs::create_directories(out_dir);
  write_effective_config(out_dir, "train-node", echo);
  write_text(out_dir / "epochs.tsv", format_epoch_log(model.history));
  save_checkpoint((out_dir / "checkpoint.txt").string(), model.params, cfg.seed);

  std::vector<std::pair<std::string, double>> metrics;
  const EpochStats& last = model.history.back();
  metrics.emplace_back("final_task_loss", last.task_loss);
  metrics.emplace_back("final_gsd", last.gsd);
  metrics.emplace_back("final_total", last.total);

  const NormalizedAdjacency adj_s = renormalized_adjacency(source);
  const NormalizedAdjacency adj_t = renormalized_adjacency(target);
  if (!cfg.regression) {
    metrics.emplace_back("source_accuracy",
                         accuracy(predict_classes(adj_s, source.features, model.params),
                                  *source.labels));
    if (target.labels)
      metrics.emplace_back("target_accuracy",
                           accuracy(predict_classes(adj_t, target.features, model.params),
                                    *target.labels));
  } else {
    const Eigen::VectorXd pred_s = predict_values(adj_s, source.features, model.params);
    metrics.emplace_back("source_mae", (pred_s - *source.targets).cwiseAbs().mean());
    if (target.targets) {
      const Eigen::VectorXd pred_t = predict_values(adj_t, target.features, model.params);
      const MaeR2 m = mae_r2(pred_t, *target.targets);
      metrics.emplace_back("target_mae", m.mae);
      metrics.emplace_back("target_r2", m.r2);
    }
  }
  write_text(out_dir / "metrics.tsv", format_metrics(metrics));

  std::cout << format_metrics(metrics);
  std::cout << "wrote " << (out_dir / "metrics.tsv").string() << "\n";
  return 0;
}

// ---- train-rec -------------------------------------------------------------

struct LooSplit {
  std::vector<std::pair<int, int>> train;              // (user, item) kept for training
  std::map<int, int> held_out;                         // user -> held-out item
  std::vector<std::set<int>> user_items;               // full positive sets
};

// Holds out each user's last-listed interaction (dedup keeps first
// occurrence, so "last" follows file order).
LooSplit leave_one_out(const InteractionData& data) {
  LooSplit split;
  split.user_items.resize(data.num_users);
  std::map<int, size_t> last_pos;
  for (size_t k = 0; k < data.interactions.size(); ++k) {
    const auto& [u, i] = data.interactions[k];
    split.user_items[u].insert(i);
    last_pos[u] = k;
  }
  std::set<size_t> held_positions;
  for (const auto& [u, pos] : last_pos) {
    split.held_out[u] = data.interactions[pos].second;
    held_positions.insert(pos);
  }
  for (size_t k = 0; k < data.interactions.size(); ++k)
    if (!held_positions.count(k)) split.train.push_back(data.interactions[k]);
  return split;
}

int run_train_rec(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "train-rec");

  const std::string source_path = resolve_path(sec.require<std::string>("source_interactions"));
  const std::string target_path = resolve_path(sec.require<std::string>("target_interactions"));

  TrainConfig rec_defaults;
  rec_defaults.lambda = 0.1;
  TrainConfig cfg = read_train_config(sec, ov, rec_defaults);
  cfg.link_head_hidden = sec.get<std::vector<int>>("link_head_hidden", {16});
  cfg.negatives_per_positive = sec.get<int>("negatives_per_positive", 4);
  const int eval_negatives = sec.get<int>("eval_negatives", 99);
  int k = sec.get<int>("k", 10);
  if (ov.k) k = *ov.k;
  if (eval_negatives < 1) throw std::invalid_argument("train-rec: eval_negatives must be >= 1");
  if (k < 1) throw std::invalid_argument("train-rec: k must be >= 1");

  const fs::path out_dir = resolve_out_dir(sec, ov, "train-rec");
  sec.done();

  json echo = train_config_echo(cfg);
  echo["source_interactions"] = source_path;
  echo["target_interactions"] = target_path;
  echo["link_head_hidden"] = cfg.link_head_hidden;
  echo["negatives_per_positive"] = cfg.negatives_per_positive;
  echo["eval_negatives"] = eval_negatives;
  echo["k"] = k;
  echo["out"] = out_dir.string();

  const InteractionData source_data = load_interactions_csv(source_path);
  const InteractionData target_data = load_interactions_csv(target_path);

  const Graph source = bipartite_graph(source_data, cfg.max_degree);

  const LooSplit split = leave_one_out(target_data);
  InteractionData target_train = target_data;
  target_train.interactions = split.train;
  const Graph target = bipartite_graph(target_train, cfg.max_degree);

  const TrainedModel model = train_grade_r(source, target, cfg);

  // Rank the held-out positive against sampled unseen items, scored with the
  // trained link head on the masked target graph's embeddings.
  const NormalizedAdjacency adj_t = renormalized_adjacency(target);
  const Eigen::MatrixXd f_final =
      gcn_forward(adj_t, target.features, model.params).f.back();

  RngStream eval_rng(cfg.seed, "eval-negatives");
  RankedEval ranked;
  ranked.k = k;
  for (const auto& [user, pos_item] : split.held_out) {
    const auto& seen = split.user_items[user];
    std::vector<int> complement;
    for (int it = 0; it < target_data.num_items; ++it)
      if (!seen.count(it)) complement.push_back(it);
    if (complement.empty()) continue;  // user saturates the catalog

    std::vector<int> negatives;
    if (static_cast<int>(complement.size()) <= eval_negatives) {
      negatives = complement;
    } else {
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < eval_negatives)
        chosen.insert(complement[eval_rng.uniform_int(0, static_cast<int>(complement.size()) - 1)]);
      negatives.assign(chosen.begin(), chosen.end());
    }

    UserCase uc;
    uc.positive_index = 0;
    std::vector<std::pair<int, int>> pairs;
    const auto item_node = [&](int item) { return target_data.num_users + item; };
    uc.candidate_ids.push_back(item_node(pos_item));
    pairs.emplace_back(user, item_node(pos_item));
    for (int item : negatives) {
      uc.candidate_ids.push_back(item_node(item));
      pairs.emplace_back(user, item_node(item));
    }
    const Eigen::VectorXd scores = link_scores(f_final, pairs, model.params);
    uc.scores.assign(scores.data(), scores.data() + scores.size());
    ranked.users.push_back(std::move(uc));
  }
  if (ranked.users.empty())
    throw std::runtime_error("train-rec: no evaluable users after leave-one-out");

  const RankingMetrics rm = rank_metrics(ranked);

  fs::create_directories(out_dir);
  write_effective_config(out_dir, "train-rec", echo);
  write_text(out_dir / "epochs.tsv", format_epoch_log(model.history));
  save_checkpoint((out_dir / "checkpoint.txt").string(), model.params, cfg.seed);

  const std::string suffix = "@" + std::to_string(k);
  std::vector<std::pair<std::string, double>> metrics;
  const EpochStats& last = model.history.back();
  metrics.emplace_back("final_task_loss", last.task_loss);
  metrics.emplace_back("final_gsd", last.gsd);
  metrics.emplace_back("final_total", last.total);
  metrics.emplace_back("hr" + suffix, rm.hit_rate);
  metrics.emplace_back("mrr" + suffix, rm.mrr);
  metrics.emplace_back("ndcg" + suffix, rm.ndcg);
  write_text(out_dir / "metrics.tsv", format_metrics(metrics));

  std::cout << format_metrics(metrics);
  std::cout << "wrote " << (out_dir / "metrics.tsv").string() << "\n";
  return 0;
}

// ---- kernel ----------------------------------------------------------------

std::vector<std::string> kernel_labels(const Graph& g, const std::optional<std::string>& path,
                                       int degree_bucket) {
  if (!path) return degree_bucket_labels(g, degree_bucket);
  std::vector<std::string> labels = load_token_lines(*path);
  if (static_cast<int>(labels.size()) != g.num_nodes)
    throw std::runtime_error(*path + ": " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(g.num_nodes) + " nodes");
  return labels;
}

int run_kernel(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "kernel");

  const std::string edges_a = resolve_path(sec.require<std::string>("edges_a"));
  const std::string edges_b = resolve_path(sec.require<std::string>("edges_b"));
  auto labels_a = sec.opt<std::string>("labels_a");
  auto labels_b = sec.opt<std::string>("labels_b");
  if (labels_a) labels_a = resolve_path(*labels_a);
  if (labels_b) labels_b = resolve_path(*labels_b);
  int depth = sec.get<int>("depth", 2);
  if (ov.depth) depth = *ov.depth;
  const int degree_bucket = sec.get<int>("degree_bucket", 16);
  sec.done();

  const Graph a = load_graph_csv(edges_a, std::nullopt, std::nullopt, LabelMode::None);
  const Graph b = load_graph_csv(edges_b, std::nullopt, std::nullopt, LabelMode::None);

  const KernelResult res =
      wl_subtree_kernel_detail(a, kernel_labels(a, labels_a, degree_bucket), b,
                               kernel_labels(b, labels_b, degree_bucket), depth);

  char buf[96];
  for (size_t m = 0; m < res.per_depth.size(); ++m) {
    std::snprintf(buf, sizeof(buf), "depth %zu\tmatches %lld\tvalue %.12g\n", m,
                  res.match_counts[m], res.per_depth[m]);
    std::cout << buf;
  }
  std::snprintf(buf, sizeof(buf), "kernel\t%.12g\n", res.value);
  std::cout << buf;
  return 0;
}

// ---- gsd -------------------------------------------------------------------

void print_report(const DiscrepancyReport& rep) {
  char buf[96];
  for (size_t m = 0; m < rep.per_depth.size(); ++m) {
    if (!rep.bandwidths.empty()) {
      std::snprintf(buf, sizeof(buf), "depth %zu\t%.12g\tbandwidth %.12g\n", m, rep.per_depth[m],
                    rep.bandwidths[m]);
    } else {
      std::snprintf(buf, sizeof(buf), "depth %zu\t%.12g\n", m, rep.per_depth[m]);
    }
    std::cout << buf;
  }
  std::snprintf(buf, sizeof(buf), "gsd\t%.12g\n", rep.gsd);
  std::cout << buf;
}

int run_gsd(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "gsd");

  const std::string edges_a = resolve_path(sec.require<std::string>("edges_a"));
  const std::string edges_b = resolve_path(sec.require<std::string>("edges_b"));
  auto features_a = sec.opt<std::string>("features_a");
  auto features_b = sec.opt<std::string>("features_b");
  auto labels_a = sec.opt<std::string>("labels_a");
  auto labels_b = sec.opt<std::string>("labels_b");
  auto checkpoint_path = sec.opt<std::string>("checkpoint");
  if (features_a) features_a = resolve_path(*features_a);
  if (features_b) features_b = resolve_path(*features_b);
  if (labels_a) labels_a = resolve_path(*labels_a);
  if (labels_b) labels_b = resolve_path(*labels_b);
  if (checkpoint_path) checkpoint_path = resolve_path(*checkpoint_path);

  std::string base = sec.get<std::string>("base", "tv");
  if (ov.base) base = *ov.base;
  std::string variant_name = sec.get<std::string>("variant", "plain");
  if (ov.variant) variant_name = *ov.variant;
  const GsdVariant variant = parse_variant(variant_name);
  const MmdEstimator estimator = parse_estimator(sec.get<std::string>("estimator", "biased"));
  int depth = sec.get<int>("depth", 2);
  if (ov.depth) depth = *ov.depth;
  const int max_degree = sec.get<int>("max_degree", 32);
  const int degree_bucket = sec.get<int>("degree_bucket", 16);
  sec.done();

  if (base == "tv") {
    if (variant == GsdVariant::Label)
      throw std::invalid_argument(
          "gsd: the counting path already keys on labels; use variant plain or degree");
    const Graph a = load_graph_csv(edges_a, std::nullopt, std::nullopt, LabelMode::None);
    const Graph b = load_graph_csv(edges_b, std::nullopt, std::nullopt, LabelMode::None);

    WlRelabeler relabeler;
    WlColorSequence sa = relabeler.relabel(a, kernel_labels(a, labels_a, degree_bucket), depth);
    WlColorSequence sb = relabeler.relabel(b, kernel_labels(b, labels_b, degree_bucket), depth);
    if (variant == GsdVariant::Degree) {
      sa = refine_with_degrees(sa, a.degrees(), relabeler);
      sb = refine_with_degrees(sb, b.degrees(), relabeler);
    }
    print_report(gsd_histogram_tv(sa, sb));
    return 0;
  }

  // learned path: embeddings from a trained checkpoint
  if (!checkpoint_path)
    throw std::invalid_argument("gsd: base '" + base + "' needs a checkpoint");
  const Checkpoint cp = load_checkpoint(*checkpoint_path);

  const Graph a = load_graph_csv(edges_a, features_a, std::nullopt, LabelMode::None, max_degree);
  const Graph b = load_graph_csv(edges_b, features_b, std::nullopt, LabelMode::None, max_degree);
  const NormalizedAdjacency adj_a = renormalized_adjacency(a);
  const NormalizedAdjacency adj_b = renormalized_adjacency(b);
  const SubtreeEmbeddingSequence seq_a = gcn_forward(adj_a, a.features, cp.params);
  const SubtreeEmbeddingSequence seq_b = gcn_forward(adj_b, b.features, cp.params);

  Eigen::MatrixXd extra_a, extra_b;
  bool has_extra = false;
  if (variant == GsdVariant::Degree) {
    extra_a = degree_one_hot(a, max_degree);
    extra_b = degree_one_hot(b, max_degree);
    has_extra = true;
  } else if (variant == GsdVariant::Label) {
    if (!labels_a) throw std::invalid_argument("gsd: label variant needs labels_a");
    const Graph la = load_graph_csv(edges_a, std::nullopt, labels_a, LabelMode::ClassIndex);
    Eigen::VectorXi ya = *la.labels;
    Eigen::VectorXi yb;
    int num_classes;
    if (labels_b) {
      const Graph lb = load_graph_csv(edges_b, std::nullopt, labels_b, LabelMode::ClassIndex);
      yb = *lb.labels;
      num_classes = std::max(ya.maxCoeff(), yb.maxCoeff()) + 1;
    } else {
      yb = predict_classes(adj_b, b.features, cp.params);  // pseudo-labels
      num_classes = static_cast<int>(cp.params.head_dims().back());
      if (ya.maxCoeff() >= num_classes)
        throw std::invalid_argument("gsd: labels_a exceed the checkpoint's class count");
    }
    extra_a = Eigen::MatrixXd::Zero(ya.size(), num_classes);
    for (Eigen::Index i = 0; i < ya.size(); ++i) extra_a(i, ya(i)) = 1.0;
    extra_b = Eigen::MatrixXd::Zero(yb.size(), num_classes);
    for (Eigen::Index i = 0; i < yb.size(); ++i) extra_b(i, yb(i)) = 1.0;
    has_extra = true;
  }

  DiscrepancyReport rep;
  if (base == "mmd") {
    rep = gsd_mmd_report(seq_a, seq_b, has_extra ? &extra_a : nullptr,
                         has_extra ? &extra_b : nullptr, estimator);
  } else if (base == "coral") {
    const BaseDiscrepancy coral_base = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
      return coral(x, y);
    };
    rep = has_extra ? gsd_degree(seq_a, seq_b, extra_a, extra_b, coral_base, "coral")
                    : gsd(seq_a, seq_b, coral_base, "coral");
  } else {
    throw std::invalid_argument("gsd: unknown base '" + base + "' (expected tv, mmd or coral)");
  }
  print_report(rep);
  return 0;
}

// ---- bench -----------------------------------------------------------------

int run_bench_cmd(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "bench");

  const std::vector<int> sizes =
      sec.get<std::vector<int>>("sizes", {1000, 2000, 4000, 8000});
  TrainConfig cfg = read_train_config(sec, ov, bench_default_config());
  auto out = sec.opt<std::string>("out");
  if (ov.out) out = ov.out;
  sec.done();

  const BenchResult res = run_bench(sizes, cfg.seed, cfg);

  std::string table = "n\tseconds\n";
  char buf[64];
  for (const auto& row : res.rows) {
    std::snprintf(buf, sizeof(buf), "%d\t%.6f\n", row.n, row.seconds);
    table += buf;
  }
  if (res.fit_r2) {
    std::snprintf(buf, sizeof(buf), "fit_r2\t%.6f\n", *res.fit_r2);
    table += buf;
  }
  std::cout << table;

  if (out) {
    const fs::path out_dir = resolve_path(*out);
    fs::create_directories(out_dir);
    json echo = train_config_echo(cfg);
    echo["sizes"] = sizes;
    echo["out"] = out_dir.string();
    write_effective_config(out_dir, "bench", echo);
    write_text(out_dir / "bench.tsv", table);
  }
  return 0;
}

// ---- synth -----------------------------------------------------------------

int run_synth(const json& section, const CliOverrides& ov) {
  SectionReader sec(section, "synth");

  SynthShiftConfig cfg;
  cfg.nodes_per_block = sec.get<int>("nodes_per_block", cfg.nodes_per_block);
  cfg.num_blocks = sec.get<int>("num_blocks", cfg.num_blocks);
  cfg.intra_edge_prob = sec.get<double>("intra_edge_prob", cfg.intra_edge_prob);
  cfg.inter_edge_prob = sec.get<double>("inter_edge_prob", cfg.inter_edge_prob);
  cfg.feature_dim = sec.get<int>("feature_dim", cfg.feature_dim);
  cfg.source_mean_scale = sec.get<double>("source_mean_scale", cfg.source_mean_scale);
  cfg.target_mean_scale = sec.get<double>("target_mean_scale", cfg.target_mean_scale);
  cfg.target_intra_edge_prob = sec.opt<double>("target_intra_edge_prob");
  cfg.seed = sec.get<std::uint64_t>("seed", 0);
  if (ov.seed) cfg.seed = *ov.seed;
  const fs::path out_dir = resolve_out_dir(sec, ov, "synth");
  sec.done();

  const auto [source, target] = synth_shift_pair(cfg);

  fs::create_directories(out_dir);
  json echo;
  echo["nodes_per_block"] = cfg.nodes_per_block;
  echo["num_blocks"] = cfg.num_blocks;
  echo["intra_edge_prob"] = cfg.intra_edge_prob;
  echo["inter_edge_prob"] = cfg.inter_edge_prob;
  echo["feature_dim"] = cfg.feature_dim;
  echo["source_mean_scale"] = cfg.source_mean_scale;
  echo["target_mean_scale"] = cfg.target_mean_scale;
  if (cfg.target_intra_edge_prob) echo["target_intra_edge_prob"] = *cfg.target_intra_edge_prob;
  echo["seed"] = cfg.seed;
  echo["out"] = out_dir.string();
  write_effective_config(out_dir, "synth", echo);

  save_edges_csv((out_dir / "source_edges.csv").string(), source);
  save_features_csv((out_dir / "source_features.csv").string(), source);
  save_labels((out_dir / "source_labels.csv").string(), source);
  save_edges_csv((out_dir / "target_edges.csv").string(), target);
  save_features_csv((out_dir / "target_features.csv").string(), target);
  save_labels((out_dir / "target_labels.csv").string(), target);

  std::cout << "wrote source/target graphs to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int run_cli_command(const std::string& subcommand, const std::optional<std::string>& config_path,
                    const CliOverrides& overrides) {
  const json config = load_config_file(config_path);
  const json section = config.contains(subcommand) ? config.at(subcommand) : json::object();
  if (!section.is_object())
    throw std::runtime_error("config: section '" + subcommand + "' must be an object");

  if (subcommand == "train-node") return run_train_node(section, overrides);
  if (subcommand == "train-rec") return run_train_rec(section, overrides);
  if (subcommand == "kernel") return run_kernel(section, overrides);
  if (subcommand == "gsd") return run_gsd(section, overrides);
  if (subcommand == "bench") return run_bench_cmd(section, overrides);
  if (subcommand == "synth") return run_synth(section, overrides);
  throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
}

}  // namespace grade
