#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgcl/experiments.hpp"
#include "kgcl/losses.hpp"
#include "kgcl/synth.hpp"
#include "kgcl/trainer.hpp"

namespace kgcl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Flag plumbing shared by train/evaluate/experiment.

struct DataOpts {
  std::string interactions;
  std::string kg_path;
  std::string test_path;
  bool use_synth = false;
  SynthConfig synth;
  std::uint64_t synth_seed = 1;
};

inline void add_data_flags(CLI::App* cmd, DataOpts& o, bool synth_allowed) {
  cmd->add_option("--interactions", o.interactions, "train interactions file");
  cmd->add_option("--kg", o.kg_path, "knowledge graph triples file");
  cmd->add_option("--test", o.test_path, "held-out test interactions file");
  if (synth_allowed) {
    cmd->add_flag("--synth", o.use_synth, "use a generated synthetic dataset");
    cmd->add_option("--synth-seed", o.synth_seed, "synthetic data seed");
    cmd->add_option("--synth-users", o.synth.num_users, "synthetic user count");
    cmd->add_option("--synth-items", o.synth.num_items, "synthetic item count");
    cmd->add_option("--synth-edges-per-user", o.synth.edges_per_user,
                    "interactions sampled per user");
    cmd->add_option("--synth-noise-items", o.synth.noise_item_fraction,
                    "fraction of items with noisy triples");
    cmd->add_option("--synth-test-fraction", o.synth.test_fraction,
                    "held-out fraction per user");
  }
}

struct LoadedData {
  DataSplit split;
  KnowledgeGraph kg;
  std::vector<std::uint8_t> triple_is_noise;  // synth only
  std::vector<std::uint8_t> item_has_noise;   // synth only
};

inline LoadedData load_data(const DataOpts& o) {
  LoadedData d;
  if (o.use_synth) {
    if (!o.interactions.empty())
      throw std::runtime_error("--synth and --interactions are mutually exclusive");
    Rng rng = make_rng(derive_seed(o.synth_seed, "synth"));
    SynthData s = synth_generate(o.synth, rng);
    d.split = std::move(s.split);
    d.kg = std::move(s.kg);
    d.triple_is_noise = std::move(s.triple_is_noise);
    d.item_has_noise = std::move(s.item_has_noise);
    return d;
  }
  if (o.interactions.empty()) throw std::runtime_error("--interactions (or --synth) required");
  InteractionGraph train = load_interactions(o.interactions).graph;
  std::size_t num_items = train.num_items;
  std::vector<std::vector<std::uint32_t>> test(train.num_users);
  if (!o.test_path.empty()) {
    InteractionLoadResult t = load_interactions(o.test_path);
    if (t.graph.num_items > num_items) num_items = t.graph.num_items;
    if (t.graph.num_users > train.num_users)
      throw std::runtime_error("test file references unknown users");
    test.assign(train.num_users, {});
    for (const Edge& e : t.graph.edges) test[e.first].push_back(e.second);
    for (auto& v : test) std::sort(v.begin(), v.end());
  }
  if (num_items > train.num_items) {
    // test-only items: widen the item vocabulary
    train = make_interaction_graph(train.num_users, num_items, train.edges).graph;
  }
  d.split.train = std::move(train);
  d.split.test = std::move(test);
  d.split.validate();
  if (o.kg_path.empty()) throw std::runtime_error("--kg required");
  d.kg = load_kg(o.kg_path, d.split.train.num_items).kg;
  return d;
}

inline void add_train_flags(CLI::App* cmd, TrainConfig& c) {
  cmd->add_option("--dim", c.dim, "embedding dimension");
  cmd->add_option("--lr", c.lr, "learning rate");
  cmd->add_option("--batch-size", c.batch_size, "BPR triples per batch");
  cmd->add_option("--epochs", c.epochs, "training epochs");
  cmd->add_option("--layers", c.layers, "propagation layers (1..4)");
  cmd->add_option("--lambda1", c.lambda1, "contrastive loss weight");
  cmd->add_option("--lambda2", c.lambda2, "L2 regularization weight");
  cmd->add_option("--tau", c.tau, "InfoNCE temperature");
  cmd->add_option("--p-k", c.p_k, "KG triple drop rate");
  cmd->add_option("--p-tau", c.p_tau, "truncation probability");
  cmd->add_option("--p-a", c.p_a, "keep-probability strength");
  cmd->add_option("--negative-scope", c.negative_scope, "in-batch | full");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--eval-every", c.eval_every, "evaluate every N epochs");
  cmd->add_option("--patience", c.early_stop_patience, "early stop patience (evals)");
  cmd->add_option("--eval-n", c.eval_n, "ranking cutoff N");
  cmd->add_flag("--no-transe,!--transe", c.transe_enabled, "toggle the TransE pass");
  cmd->add_flag("--invert-keep-prob", c.invert_keep_prob,
                "treat edge probabilities as dropout rates (literal reading)");
  cmd->add_flag("--include-positive-in-denominator", c.include_positive_in_denominator,
                "standard InfoNCE denominator");
  cmd->add_flag("--mixed-negatives", c.mixed_negatives, "cross-type negative pools");
  cmd->add_option("--variant", c.variant, "full | no-kga | no-kgc");
  cmd->add_flag("--deterministic,!--no-deterministic", c.deterministic,
                "deterministic execution");
}

inline void write_resolved_config(const CLI::App* cmd, const std::string& outdir) {
  write_file((fs::path(outdir) / "config.resolved").string(),
             cmd->config_to_str(true, false));
}

inline std::string reports_csv(const std::vector<EpochReport>& reports) {
  std::string out = "epoch,bpr,cl,te,l2,total,recall,ndcg\n";
  for (const EpochReport& r : reports) {
    out += std::to_string(r.epoch) + ',' + fmt(r.loss.bpr) + ',' +
           fmt(r.loss.contrastive) + ',' + fmt(r.transe_loss) + ',' + fmt(r.loss.l2) +
           ',' + fmt(r.loss.total) + ',';
    if (r.metrics) out += fmt(r.metrics->recall) + ',' + fmt(r.metrics->ndcg);
    else out += ",";
    out += '\n';
  }
  return out;
}

inline json metrics_json(const RankingMetrics& m) {
  json j{{"recall", m.recall}, {"ndcg", m.ndcg}, {"n", m.n}, {"users", m.user_count}};
  if (!m.per_group.empty()) {
    json groups;
    for (const auto& [gid, gm] : m.per_group)
      groups[std::to_string(gid)] = {{"recall", gm.recall},
                                     {"ndcg", gm.ndcg},
                                     {"users", gm.user_count}};
    j["per_group"] = groups;
  }
  return j;
}

// ---------------------------------------------------------------------------

struct TrainCmd {
  DataOpts data;
  TrainConfig cfg;
  std::string outdir = ".";
};

inline int run_train(const TrainCmd& t, const CLI::App* cmd) {
  fs::create_directories(t.outdir);
  write_resolved_config(cmd, t.outdir);
  LoadedData d = load_data(t.data);
  TrainResult res = train(d.split, d.kg, t.cfg, &std::cout);

  write_file((fs::path(t.outdir) / "reports.csv").string(), reports_csv(res.reports));
  Checkpoint ck;
  ck.store = std::move(res.store);
  ck.adam = std::move(res.adam);
  ck.seed = t.cfg.seed;
  ck.epoch = res.reports.empty() ? 0 : res.reports.back().epoch + 1;
  save_checkpoint(ck, (fs::path(t.outdir) / "model.ckpt").string());

  json summary;
  summary["epochs_run"] = res.reports.size();
  summary["diverged"] = res.diverged;
  summary["variant"] = t.cfg.variant;
  summary["seed"] = t.cfg.seed;
  if (res.best_recall >= 0.0) {
    summary["best_epoch"] = res.best_epoch;
    summary["best_recall"] = res.best_recall;
  }
  for (auto it = res.reports.rbegin(); it != res.reports.rend(); ++it)
    if (it->metrics) {
      summary["final"] = metrics_json(*it->metrics);
      break;
    }
  if (!res.reports.empty()) {
    summary["final_loss"] = {{"bpr", res.reports.back().loss.bpr},
                             {"cl", res.reports.back().loss.contrastive},
                             {"te", res.reports.back().transe_loss},
                             {"total", res.reports.back().loss.total}};
  }
  write_file((fs::path(t.outdir) / "summary.json").string(), summary.dump(2) + "\n");
  if (res.diverged) {
    std::cerr << "training diverged; checkpoint holds the last finite epoch\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateCmd {
  DataOpts data;
  std::string ckpt;
  std::size_t n = 20;
  std::size_t layers = 3;
  std::string out;
};

inline int run_evaluate(const EvaluateCmd& e) {
  LoadedData d = load_data(e.data);
  Checkpoint ck = load_checkpoint(e.ckpt);
  if (ck.store.dims.num_users != d.split.train.num_users ||
      ck.store.dims.num_entities < d.kg.num_entities)
    throw std::runtime_error("checkpoint dimensions do not match the dataset");
  KgAggregate agg = aggregate_items(ck.store, d.kg, nullptr);
  PropagationOutput out =
      propagate(ck.store.user_emb, agg.items, d.split.train, nullptr, e.layers);
  RankingMetrics m = evaluate(out, d.split, e.n);
  std::string text = metrics_json(m).dump(2) + "\n";
  std::cout << text;
  if (!e.out.empty()) write_file(e.out, text);
  return 0;
}

// ---------------------------------------------------------------------------

struct ExperimentCmd {
  DataOpts data;
  TrainConfig cfg;
  std::string outdir = ".";
  std::size_t num_seeds = 5;
  std::uint64_t base_seed = 100;
  double fraction = 0.1;       // kg-noise
  std::size_t threshold = 20;  // sparse-users
  std::size_t groups = 5;      // long-tail-items
  double tail_fraction = 0.2;  // long-tail-entities
};

inline std::vector<std::uint64_t> experiment_seeds(const ExperimentCmd& e) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < e.num_seeds; ++k) seeds.push_back(e.base_seed + k);
  return seeds;
}

inline std::string grouped_csv_header() {
  return "epoch,variant,group,recall,ndcg,seed\n";
}

inline int run_experiment_ablation(const ExperimentCmd& e, const CLI::App* cmd) {
  fs::create_directories(e.outdir);
  write_resolved_config(cmd, e.outdir);
  LoadedData d = load_data(e.data);
  std::vector<std::string> variants{"full", "no-kga", "no-kgc"};
  auto results = run_ablation(d.split, d.kg, e.cfg, variants, experiment_seeds(e),
                              &std::cout);
  std::string csv = grouped_csv_header();
  json summary;
  for (const VariantResult& vr : results) {
    std::vector<double> recalls = vr.recalls();
    for (const SeedRun& r : vr.runs)
      csv += std::to_string(e.cfg.epochs - 1) + ',' + vr.variant + ",all," +
             fmt(r.metrics.recall) + ',' + fmt(r.metrics.ndcg) + ',' +
             std::to_string(r.seed) + '\n';
    summary[vr.variant] = {{"mean_recall", mean_of(recalls)},
                           {"stddev_recall", sample_stddev(recalls)}};
  }
  write_file((fs::path(e.outdir) / "ablation.csv").string(), csv);
  write_file((fs::path(e.outdir) / "ablation_summary.json").string(),
             summary.dump(2) + "\n");
  return 0;
}

inline int run_experiment_kg_noise(const ExperimentCmd& e, const CLI::App* cmd) {
  fs::create_directories(e.outdir);
  write_resolved_config(cmd, e.outdir);
  LoadedData d = load_data(e.data);
  NoiseStudyResult res =
      run_noise_study(d.split, d.kg, e.fraction, e.cfg, experiment_seeds(e), &std::cout);
  std::string csv =
      "variant,seed,clean_recall,clean_ndcg,noisy_recall,noisy_ndcg,relative_decrease\n";
  for (const NoiseRun& r : res.runs)
    csv += res.variant + ',' + std::to_string(r.seed) + ',' + fmt(r.clean.recall) +
           ',' + fmt(r.clean.ndcg) + ',' + fmt(r.noisy.recall) + ',' +
           fmt(r.noisy.ndcg) + ',' + fmt(r.relative_decrease) + '\n';
  write_file((fs::path(e.outdir) / "kg_noise.csv").string(), csv);
  json summary{{"variant", res.variant},
               {"fraction", res.fraction},
               {"mean_relative_decrease", res.mean_decrease()}};
  write_file((fs::path(e.outdir) / "kg_noise_summary.json").string(),
             summary.dump(2) + "\n");
  return 0;
}

inline int run_experiment_grouped(const ExperimentCmd& e, const CLI::App* cmd,
                                  const std::string& kind) {
  fs::create_directories(e.outdir);
  write_resolved_config(cmd, e.outdir);
  LoadedData d = load_data(e.data);

  DataSplit split = d.split;
  std::vector<std::pair<std::string, EvalFilter>> cells;
  if (kind == "sparse-users") {
    split = split_sparse_users(std::move(split), e.threshold);
    cells = {{"sparse", EvalFilter{kSparseGroup, {}}},
             {"dense", EvalFilter{kDenseGroup, {}}}};
  } else if (kind == "long-tail-items") {
    split = split_longtail_items(std::move(split), e.groups);
    for (std::size_t g = 0; g < e.groups; ++g)
      cells.push_back({"item-group-" + std::to_string(g),
                       EvalFilter{{}, static_cast<int>(g)}});
  } else {  // long-tail-entities
    split = longtail_entity_filter(d.kg, std::move(split), e.tail_fraction);
    cells = {{"longtail-entities", EvalFilter{}}};
  }

  std::string csv = grouped_csv_header();
  for (std::uint64_t seed : experiment_seeds(e)) {
    TrainConfig cfg = e.cfg;
    cfg.seed = seed;
    TrainResult res = train(split, d.kg, cfg, &std::cout);
    if (res.diverged) throw std::runtime_error("training diverged");
    PropagationOutput out =
        detail::propagate_full(res.store, split.train, d.kg, cfg.layers);
    for (const auto& [name, filter] : cells) {
      RankingMetrics m = evaluate(out, split, cfg.eval_n, filter);
      csv += std::to_string(cfg.epochs - 1) + ',' + cfg.variant + ',' + name + ',' +
             fmt(m.recall) + ',' + fmt(m.ndcg) + ',' + std::to_string(seed) + '\n';
    }
  }
  std::string fname = kind;
  for (char& c : fname)
    if (c == '-') c = '_';
  write_file((fs::path(e.outdir) / (fname + ".csv")).string(), csv);
  return 0;
}

// ---------------------------------------------------------------------------

struct SynthGenCmd {
  SynthConfig cfg;
  std::uint64_t seed = 1;
  std::string outdir = ".";
};

inline int run_synth_gen(const SynthGenCmd& s, const CLI::App* cmd) {
  fs::create_directories(s.outdir);
  write_resolved_config(cmd, s.outdir);
  Rng rng = make_rng(derive_seed(s.seed, "synth"));
  SynthData d = synth_generate(s.cfg, rng);
  save_interactions(d.split.train, (fs::path(s.outdir) / "train.txt").string());
  save_test_items(d.split.test, (fs::path(s.outdir) / "test.txt").string());
  save_kg(d.kg, (fs::path(s.outdir) / "kg.txt").string());
  save_noise_labels(d.kg, d.triple_is_noise,
                    (fs::path(s.outdir) / "noise_labels.txt").string());
  return 0;
}

struct InjectNoiseCmd {
  std::string kg_path;
  std::size_t num_items = 0;
  double fraction = 0.1;
  std::uint64_t seed = 1;
  std::string out = "kg_noisy.txt";
};

inline int run_inject_noise(const InjectNoiseCmd& c) {
  std::size_t num_items = c.num_items;
  if (num_items == 0) {
    // default: treat every head as an item
    KgLoadResult probe = load_kg(c.kg_path, 0);
    for (const Triple& t : probe.kg.triples)
      num_items = std::max<std::size_t>(num_items, t.head + 1);
  }
  KnowledgeGraph kg = load_kg(c.kg_path, num_items).kg;
  Rng rng = make_rng(derive_seed(c.seed, "kg-noise"));
  KnowledgeGraph noisy = inject_kg_noise(kg, c.fraction, rng);
  save_kg(noisy, c.out);
  std::cout << "triples " << kg.triples.size() << " -> " << noisy.triples.size()
            << '\n';
  return 0;
}

struct GradientCurveCmd {
  double tau = 0.2;
  std::size_t points = 201;
  std::string out;
};

inline int run_gradient_curve(const GradientCurveCmd& c) {
  std::vector<double> grid(c.points);
  for (std::size_t k = 0; k < c.points; ++k)
    grid[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(c.points - 1);
  GradientCurve curve = gradient_curve(c.tau, grid);
  std::string text = "s0=" + fmt(curve.s0) + ",g0=" + fmt(curve.g0) + "\n";
  text += "s,g\n";
  for (const auto& [s, g] : curve.points) text += fmt(s) + ',' + fmt(g) + '\n';
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
  return 0;
}

struct ConsistencyCmd {
  DataOpts data;
  std::string ckpt;
  double p_k = 0.1;
  std::uint64_t seed = 42;
  std::string out;
};

inline int run_consistency(const ConsistencyCmd& c) {
  LoadedData d = load_data(c.data);
  Checkpoint ck = load_checkpoint(c.ckpt);
  if (ck.store.dims.num_entities < d.kg.num_entities)
    throw std::runtime_error("checkpoint dimensions do not match the KG");
  Rng rng = make_rng(derive_seed(c.seed, "consistency"));
  ConsistencyScores scores = consistency_scores(ck.store, d.kg, c.p_k, rng);
  std::string text;
  for (std::size_t i = 0; i < scores.c.size(); ++i)
    text += std::to_string(i) + ' ' + fmt(scores.c[i]) + '\n';
  if (c.out.empty())
    std::cout << text;
  else
    write_file(c.out, text);
  return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
  CLI::App app{"knowledge-graph-guided contrastive learning for recommendation"};
  app.require_subcommand(1);

  TrainCmd tr;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->set_config("--config");
  add_data_flags(train_cmd, tr.data, true);
  add_train_flags(train_cmd, tr.cfg);
  train_cmd->add_option("--outdir", tr.outdir, "output directory");

  EvaluateCmd ev;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint");
  eval_cmd->set_config("--config");
  add_data_flags(eval_cmd, ev.data, false);
  eval_cmd->add_option("--ckpt", ev.ckpt, "checkpoint path")->required();
  eval_cmd->add_option("--n", ev.n, "ranking cutoff");
  eval_cmd->add_option("--layers", ev.layers, "propagation layers");
  eval_cmd->add_option("--out", ev.out, "also write metrics JSON here");

  ExperimentCmd ex;
  CLI::App* exp_cmd = app.add_subcommand("experiment", "run a study over seeds");
  exp_cmd->require_subcommand(1);
  std::vector<CLI::App*> exp_kinds;
  for (const char* kind : {"ablation", "kg-noise", "sparse-users", "long-tail-items",
                           "long-tail-entities"}) {
    CLI::App* k = exp_cmd->add_subcommand(kind, "");
    k->set_config("--config");
    add_data_flags(k, ex.data, true);
    add_train_flags(k, ex.cfg);
    k->add_option("--outdir", ex.outdir, "output directory");
    k->add_option("--seeds", ex.num_seeds, "number of seeds");
    k->add_option("--base-seed", ex.base_seed, "first seed");
    if (std::string(kind) == "kg-noise")
      k->add_option("--fraction", ex.fraction, "injected noise fraction");
    if (std::string(kind) == "sparse-users")
      k->add_option("--threshold", ex.threshold, "sparse-user degree threshold");
    if (std::string(kind) == "long-tail-items")
      k->add_option("--groups", ex.groups, "number of item groups");
    if (std::string(kind) == "long-tail-entities")
      k->add_option("--tail-fraction", ex.tail_fraction, "long-tail entity fraction");
    exp_kinds.push_back(k);
  }

  SynthGenCmd sg;
  CLI::App* synth_cmd = app.add_subcommand("synth-gen", "generate a synthetic dataset");
  synth_cmd->set_config("--config");
  synth_cmd->add_option("--users", sg.cfg.num_users, "user count");
  synth_cmd->add_option("--items", sg.cfg.num_items, "item count");
  synth_cmd->add_option("--latent-dim", sg.cfg.latent_dim, "latent factor dimension");
  synth_cmd->add_option("--edges-per-user", sg.cfg.edges_per_user, "draws per user");
  synth_cmd->add_option("--relevant-entities", sg.cfg.relevant_entities_per_item,
                        "concept entities per item");
  synth_cmd->add_option("--noise-entities", sg.cfg.noise_entities_per_item,
                        "noise entities per noisy item");
  synth_cmd->add_option("--noise-items", sg.cfg.noise_item_fraction,
                        "fraction of items with noise triples");
  synth_cmd->add_option("--test-fraction", sg.cfg.test_fraction, "holdout fraction");
  synth_cmd->add_option("--concepts", sg.cfg.num_concepts, "concept entity count");
  synth_cmd->add_option("--seed", sg.seed, "generation seed");
  synth_cmd->add_option("--outdir", sg.outdir, "output directory");

  InjectNoiseCmd in;
  CLI::App* inject_cmd = app.add_subcommand("inject-noise", "add noisy KG triples");
  inject_cmd->add_option("--kg", in.kg_path, "input KG file")->required();
  inject_cmd->add_option("--num-items", in.num_items, "item-id bound (default: max head + 1)");
  inject_cmd->add_option("--fraction", in.fraction, "fraction of triples to add");
  inject_cmd->add_option("--seed", in.seed, "seed");
  inject_cmd->add_option("--out", in.out, "output KG file");

  GradientCurveCmd gc;
  CLI::App* curve_cmd = app.add_subcommand("gradient-curve", "export g(s) for a tau");
  curve_cmd->add_option("--tau", gc.tau, "temperature");
  curve_cmd->add_option("--points", gc.points, "grid size over [-1,1]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  curve_cmd->add_option("--out", gc.out, "output CSV (default stdout)");

  ConsistencyCmd co;
  CLI::App* cons_cmd = app.add_subcommand("consistency", "dump per-item c_i");
  add_data_flags(cons_cmd, co.data, true);
  cons_cmd->add_option("--ckpt", co.ckpt, "checkpoint path")->required();
  cons_cmd->add_option("--p-k", co.p_k, "KG triple drop rate");
  cons_cmd->add_option("--seed", co.seed, "mask seed");
  cons_cmd->add_option("--out", co.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) return run_train(tr, train_cmd);
    if (*eval_cmd) return run_evaluate(ev);
    if (*exp_cmd) {
      for (CLI::App* k : exp_kinds)
        if (*k) {
          std::string kind = k->get_name();
          if (kind == "ablation") return run_experiment_ablation(ex, k);
          if (kind == "kg-noise") return run_experiment_kg_noise(ex, k);
          return run_experiment_grouped(ex, k, kind);
        }
    }
    if (*synth_cmd) return run_synth_gen(sg, synth_cmd);
    if (*inject_cmd) return run_inject_noise(in);
    if (*curve_cmd) return run_gradient_curve(gc);
    if (*cons_cmd) return run_consistency(co);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace kgcl::cli
