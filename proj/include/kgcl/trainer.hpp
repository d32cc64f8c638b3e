#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcl/augment.hpp"
#include "kgcl/data_split.hpp"
#include "kgcl/eval.hpp"
#include "kgcl/kg_encoder.hpp"
#include "kgcl/losses.hpp"
#include "kgcl/params.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

struct TrainConfig {
  std::size_t dim = 64;
  double lr = 1e-3;
  std::size_t batch_size = 2048;
  std::size_t epochs = 30;
  std::size_t layers = 3;
  double lambda1 = 0.1;
  double lambda2 = 1e-4;
  double tau = 0.2;
  double p_k = 0.1;
  double p_tau = 0.7;
  double p_a = 0.7;
  std::string negative_scope = "in-batch";  // in-batch | full
  std::uint64_t seed = 42;
  std::size_t eval_every = 5;
  std::size_t early_stop_patience = 10;
  std::size_t eval_n = 20;
  bool transe_enabled = true;
  bool invert_keep_prob = false;
  bool include_positive_in_denominator = false;
  bool mixed_negatives = false;
  std::string variant = "full";  // full | no-kga | no-kgc
  bool deterministic = true;

  void validate() const {
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    if (layers < 1 || layers > 4) throw std::invalid_argument("layers must be in 1..4");
    if (batch_size < 2) throw std::invalid_argument("batch_size must be >= 2");
    if (lambda1 < 0.0 || lambda1 > 1.0)
      throw std::invalid_argument("lambda1 must be in [0,1]");
    if (tau <= 0.0) throw std::invalid_argument("tau must be > 0");
    if (p_k < 0.0 || p_k >= 1.0) throw std::invalid_argument("p_k must be in [0,1)");
    if (p_tau <= 0.0 || p_tau > 1.0) throw std::invalid_argument("p_tau must be in (0,1]");
    if (p_a <= 0.0 || p_a > 1.0) throw std::invalid_argument("p_a must be in (0,1]");
    if (negative_scope != "in-batch" && negative_scope != "full")
      throw std::invalid_argument("negative_scope must be in-batch or full");
    if (variant != "full" && variant != "no-kga" && variant != "no-kgc")
      throw std::invalid_argument("variant must be full, no-kga or no-kgc");
    if (eval_every == 0) throw std::invalid_argument("eval_every must be >= 1");
  }

  AugmentConfig augment_config() const {
    AugmentConfig a;
    a.p_k = variant == "no-kgc" ? 0.0 : p_k;  // identity KG views, c_i = 1
    a.p_tau = p_tau;
    a.p_a = p_a;
    a.invert_keep_prob = invert_keep_prob;
    a.uniform_edge_drop = variant == "no-kga";
    return a;
  }

  JointLossConfig joint_config() const {
    JointLossConfig j;
    j.lambda1 = lambda1;
    j.lambda2 = lambda2;
    j.layers = layers;
    j.infonce.tau = tau;
    j.infonce.scope =
        negative_scope == "full" ? NegativeScope::Full : NegativeScope::InBatch;
    j.infonce.include_positive_in_denominator = include_positive_in_denominator;
    j.infonce.mixed_negatives = mixed_negatives;
    return j;
  }
};

struct EpochReport {
  std::size_t epoch = 0;
  LossBreakdown loss;
  double transe_loss = 0.0;
  std::optional<RankingMetrics> metrics;
  double wall_seconds = 0.0;
};

struct TrainResult {
  ParamStore store;
  AdamState adam;
  std::vector<EpochReport> reports;
  bool diverged = false;
  std::size_t best_epoch = 0;
  double best_recall = -1.0;
};

namespace detail {

inline std::vector<BprTriple> sample_bpr_triples(const InteractionGraph& train,
                                                 Rng& rng) {
  std::vector<std::size_t> order(train.edges.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  shuffle(order, rng);
  std::vector<BprTriple> out;
  out.reserve(order.size());
  for (std::size_t k : order) {
    const Edge& e = train.edges[k];
    if (train.user_degree(e.first) >= train.num_items) continue;  // nothing to negate
    std::uint32_t neg;
    do {
      neg = static_cast<std::uint32_t>(rand_index(rng, train.num_items));
    } while (train.has_edge(e.first, neg));
    out.push_back(BprTriple{e.first, e.second, neg});
  }
  return out;
}

inline PropagationOutput propagate_full(const ParamStore& store,
                                        const InteractionGraph& graph,
                                        const KnowledgeGraph& kg, std::size_t layers) {
  KgAggregate agg = aggregate_items(store, kg, nullptr);
  return propagate(store.user_emb, agg.items, graph, nullptr, layers);
}

}  // namespace detail

// Alternating-epoch loop: one TransE pass over the KG, then one pass over
// the interaction edges in joint-loss mini-batches with the augmented views
// fixed for the epoch. All randomness is drawn from substreams keyed by
// (seed, purpose, epoch), so resuming from a checkpoint at epoch k replays
// the remainder of an uninterrupted run exactly.
inline TrainResult train_from(const DataSplit& split, const KnowledgeGraph& kg,
                              const TrainConfig& cfg, ParamStore store,
                              AdamState adam, std::size_t start_epoch,
                              std::ostream* log = nullptr) {
  cfg.validate();
  const InteractionGraph& graph = split.train;
  if (graph.edges.empty()) throw std::invalid_argument("train graph has no edges");

  TrainResult res;
  res.store = std::move(store);
  res.adam = std::move(adam);

  const bool can_eval = split.num_test_users() > 0;
  const JointLossConfig jcfg = cfg.joint_config();
  const AugmentConfig acfg = cfg.augment_config();
  std::size_t evals_since_best = 0;

  ParamStore last_finite_store = res.store;
  AdamState last_finite_adam = res.adam;

  for (std::size_t epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    EpochReport rep;
    rep.epoch = epoch;

    if (cfg.transe_enabled && !kg.triples.empty()) {
      Rng rng = make_rng(derive_seed(cfg.seed, "transe", epoch));
      rep.transe_loss = transe_epoch(res.store, res.adam, kg, cfg.batch_size, rng);
    }

    Rng view_rng = make_rng(derive_seed(cfg.seed, "views", epoch));
    AugmentedViewPair views = make_view_pair(res.store, kg, graph, acfg, view_rng);

    Rng bpr_rng = make_rng(derive_seed(cfg.seed, "bpr", epoch));
    std::vector<BprTriple> triples = detail::sample_bpr_triples(graph, bpr_rng);

    double sum_total = 0.0, sum_bpr = 0.0, sum_cl = 0.0, sum_l2 = 0.0;
    std::size_t done = 0;
    bool finite = true;
    while (done < triples.size()) {
      std::size_t n = std::min(cfg.batch_size, triples.size() - done);
      std::vector<BprTriple> batch(triples.begin() + done, triples.begin() + done + n);
      res.store.zero_grads();
      LossBreakdown lb = joint_loss(res.store, graph, kg, views, batch, jcfg);
      if (!std::isfinite(lb.total)) {
        finite = false;
        break;
      }
      adam_step(res.store, res.adam);
      sum_total += lb.total * n;
      sum_bpr += lb.bpr * n;
      sum_cl += lb.contrastive * n;
      sum_l2 += lb.l2 * n;
      done += n;
    }
    res.store.zero_grads();
    if (!finite || !res.store.user_emb.all_finite() ||
        !res.store.entity_emb.all_finite()) {
      res.store = std::move(last_finite_store);
      res.adam = std::move(last_finite_adam);
      res.diverged = true;
      return res;
    }

    double dn = static_cast<double>(triples.size());
    rep.loss.total = sum_total / dn;
    rep.loss.bpr = sum_bpr / dn;
    rep.loss.contrastive = sum_cl / dn;
    rep.loss.l2 = sum_l2 / dn;
    rep.loss.transe = rep.transe_loss;
    rep.loss.lambda1 = cfg.lambda1;
    rep.loss.lambda2 = cfg.lambda2;
    rep.loss.tau = cfg.tau;

    bool do_eval =
        can_eval && ((epoch + 1) % cfg.eval_every == 0 || epoch + 1 == cfg.epochs);
    if (do_eval) {
      PropagationOutput out =
          detail::propagate_full(res.store, graph, kg, cfg.layers);
      rep.metrics = evaluate(out, split, cfg.eval_n);
      if (rep.metrics->recall > res.best_recall) {
        res.best_recall = rep.metrics->recall;
        res.best_epoch = epoch;
        evals_since_best = 0;
      } else {
        ++evals_since_best;
      }
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log) {
      char buf[256];
      if (rep.metrics) {
        std::snprintf(buf, sizeof buf,
                      "epoch=%zu bpr=%.6g cl=%.6g te=%.6g recall@%zu=%.6g ndcg@%zu=%.6g",
                      epoch, rep.loss.bpr, rep.loss.contrastive, rep.transe_loss,
                      cfg.eval_n, rep.metrics->recall, cfg.eval_n, rep.metrics->ndcg);
      } else {
        std::snprintf(buf, sizeof buf, "epoch=%zu bpr=%.6g cl=%.6g te=%.6g", epoch,
                      rep.loss.bpr, rep.loss.contrastive, rep.transe_loss);
      }
      (*log) << buf << '\n';
    }
    res.reports.push_back(std::move(rep));

    if (do_eval && evals_since_best >= cfg.early_stop_patience) break;

    last_finite_store = res.store;
    last_finite_adam = res.adam;
  }
  return res;
}

inline TrainResult train(const DataSplit& split, const KnowledgeGraph& kg,
                         const TrainConfig& cfg, std::ostream* log = nullptr) {
  cfg.validate();
  Dims dims{split.train.num_users, std::max(kg.num_entities, split.train.num_items),
            std::max<std::size_t>(kg.num_relations, 1), cfg.dim};
  ParamStore store = init_params(dims, cfg.seed);
  AdamState adam(store, AdamConfig{cfg.lr, 0.9, 0.999, 1e-8});
  return train_from(split, kg, cfg, std::move(store), std::move(adam), 0, log);
}

// Save-then-load convenience; the text form round-trips exactly.
inline Checkpoint checkpoint_roundtrip(const Checkpoint& ck, const std::string& path) {
  save_checkpoint(ck, path);
  return load_checkpoint(path);
}

}  // namespace kgcl
