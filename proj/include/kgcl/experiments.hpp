#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcl/synth.hpp"
#include "kgcl/trainer.hpp"

namespace kgcl {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Pooled standard error of a difference of means, equal group sizes.
inline double pooled_standard_error(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("pooled SE needs two equal groups of size >= 2");
  double sa = sample_stddev(a), sb = sample_stddev(b);
  double sp2 = 0.5 * (sa * sa + sb * sb);
  return std::sqrt(sp2 * 2.0 / static_cast<double>(a.size()));
}

struct SeedRun {
  std::uint64_t seed = 0;
  RankingMetrics metrics;
};

struct VariantResult {
  std::string variant;
  std::vector<SeedRun> runs;

  std::vector<double> recalls() const {
    std::vector<double> v;
    for (const SeedRun& r : runs) v.push_back(r.metrics.recall);
    return v;
  }
};

namespace detail {

inline RankingMetrics final_metrics(const TrainResult& res) {
  for (auto it = res.reports.rbegin(); it != res.reports.rend(); ++it)
    if (it->metrics) return *it->metrics;
  throw std::runtime_error("training run produced no evaluation");
}

}  // namespace detail

inline RankingMetrics train_and_evaluate(const DataSplit& split,
                                         const KnowledgeGraph& kg, TrainConfig cfg,
                                         std::ostream* log = nullptr) {
  TrainResult res = train(split, kg, cfg, log);
  if (res.diverged) throw std::runtime_error("training diverged");
  return detail::final_metrics(res);
}

// Trains each variant over the given seeds on a shared dataset.
inline std::vector<VariantResult> run_ablation(const DataSplit& split,
                                               const KnowledgeGraph& kg,
                                               const TrainConfig& base,
                                               const std::vector<std::string>& variants,
                                               const std::vector<std::uint64_t>& seeds,
                                               std::ostream* log = nullptr) {
  std::vector<VariantResult> out;
  for (const std::string& v : variants) {
    VariantResult vr;
    vr.variant = v;
    for (std::uint64_t seed : seeds) {
      TrainConfig cfg = base;
      cfg.variant = v;
      cfg.seed = seed;
      vr.runs.push_back(SeedRun{seed, train_and_evaluate(split, kg, cfg, log)});
    }
    out.push_back(std::move(vr));
  }
  return out;
}

struct NoiseRun {
  std::uint64_t seed = 0;
  RankingMetrics clean;
  RankingMetrics noisy;
  double relative_decrease = 0.0;  // (clean - noisy) / clean, on recall
};

struct NoiseStudyResult {
  std::string variant;
  double fraction = 0.0;
  std::vector<NoiseRun> runs;

  double mean_decrease() const {
    double s = 0.0;
    for (const NoiseRun& r : runs) s += r.relative_decrease;
    return s / static_cast<double>(runs.size());
  }
};

// Trains twice per seed -- clean KG and noise-injected KG -- with identical
// seeds and splits; reports the relative Recall decrease.
inline NoiseStudyResult run_noise_study(const DataSplit& split,
                                        const KnowledgeGraph& kg, double fraction,
                                        const TrainConfig& base,
                                        const std::vector<std::uint64_t>& seeds,
                                        std::ostream* log = nullptr) {
  if (fraction <= 0.0) throw std::invalid_argument("noise fraction must be > 0");
  NoiseStudyResult out;
  out.variant = base.variant;
  out.fraction = fraction;
  for (std::uint64_t seed : seeds) {
    TrainConfig cfg = base;
    cfg.seed = seed;
    NoiseRun run;
    run.seed = seed;
    run.clean = train_and_evaluate(split, kg, cfg, log);
    Rng noise_rng = make_rng(derive_seed(seed, "kg-noise"));
    KnowledgeGraph noisy_kg = inject_kg_noise(kg, fraction, noise_rng);
    run.noisy = train_and_evaluate(split, noisy_kg, cfg, log);
    run.relative_decrease =
        run.clean.recall > 0.0 ? (run.clean.recall - run.noisy.recall) / run.clean.recall
                               : 0.0;
    out.runs.push_back(run);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Epoch-cost scaling: time one epoch at |E| and 2|E| interaction edges with
// everything else fixed, in the full-batch regime where per-epoch cost is
// linear in the edge count. The contrastive term is disabled for the timing:
// its cost follows the batch node count, not the edge count.

struct ScalingResult {
  std::vector<double> ratios;  // per trial
  double median_ratio = 0.0;
  std::size_t edges_small = 0;
  std::size_t edges_large = 0;
};

namespace detail {

inline double time_epoch(const SynthData& data, TrainConfig cfg) {
  DataSplit no_eval;
  no_eval.train = data.split.train;
  no_eval.test.assign(no_eval.train.num_users, {});
  cfg.batch_size = std::max<std::size_t>(no_eval.train.edges.size(), 2);
  cfg.epochs = 2;
  cfg.lambda1 = 0.0;
  TrainResult res = train(no_eval, data.kg, cfg);
  return res.reports.back().wall_seconds;  // second epoch, allocations warm
}

}  // namespace detail

inline ScalingResult scaling_check(std::size_t trials, std::uint64_t seed = 7) {
  SynthConfig small_cfg;
  small_cfg.num_users = 4000;
  small_cfg.num_items = 400;
  small_cfg.edges_per_user = 25;
  small_cfg.relevant_entities_per_item = 2;
  small_cfg.noise_entities_per_item = 0;
  small_cfg.noise_item_fraction = 0.0;
  small_cfg.test_fraction = 0.2;
  SynthConfig large_cfg = small_cfg;
  large_cfg.edges_per_user = 50;

  Rng rng_s = make_rng(derive_seed(seed, "scaling-small"));
  Rng rng_l = make_rng(derive_seed(seed, "scaling-large"));
  SynthData small = synth_generate(small_cfg, rng_s);
  SynthData large = synth_generate(large_cfg, rng_l);

  TrainConfig cfg;
  cfg.dim = 64;
  cfg.eval_every = 1000;

  ScalingResult out;
  out.edges_small = small.split.train.edges.size();
  out.edges_large = large.split.train.edges.size();
  for (std::size_t t = 0; t < trials; ++t) {
    double ts = detail::time_epoch(small, cfg);
    double tl = detail::time_epoch(large, cfg);
    out.ratios.push_back(tl / ts);
  }
  std::vector<double> sorted = out.ratios;
  std::sort(sorted.begin(), sorted.end());
  out.median_ratio = sorted[sorted.size() / 2];
  return out;
}

}  // namespace kgcl
