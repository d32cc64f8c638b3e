#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kgcl/interaction_graph.hpp"
#include "kgcl/kg_encoder.hpp"
#include "kgcl/knowledge_graph.hpp"
#include "kgcl/params.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

struct KgMask {
  TripleMask keep;  // 1 = triple retained
  double drop_rate = 0.0;
};

// Each triple independently dropped with probability p_k.
inline KgMask sample_kg_mask(const KnowledgeGraph& kg, double p_k, Rng& rng) {
  if (p_k < 0.0 || p_k >= 1.0)
    throw std::invalid_argument("kg drop rate must be in [0,1)");
  KgMask m;
  m.drop_rate = p_k;
  m.keep.resize(kg.triples.size());
  for (auto& b : m.keep) b = rand_bernoulli(rng, p_k) ? 0 : 1;
  return m;
}

// Cosine agreement of each item's aggregated embedding under two masked KG
// views. Items whose two view embeddings are bitwise identical (always the
// case for items with no triples, or when both masks agree on all of the
// item's triples) score exactly 1.
struct ConsistencyScores {
  std::vector<double> c;  // per item, in [-1, 1]
};

inline ConsistencyScores consistency_from_views(const Mat& view1, const Mat& view2) {
  if (view1.rows != view2.rows || view1.cols != view2.cols)
    throw std::invalid_argument("view shape mismatch");
  ConsistencyScores out;
  out.c.resize(view1.rows);
  const std::size_t d = view1.cols;
  for (std::size_t i = 0; i < view1.rows; ++i) {
    const double* a = view1.row(i);
    const double* b = view2.row(i);
    if (std::memcmp(a, b, d * sizeof(double)) == 0) {
      out.c[i] = 1.0;
      continue;
    }
    double na = norm2(a, d), nb = norm2(b, d);
    if (na < 1e-12 && nb < 1e-12) {
      out.c[i] = 1.0;
      continue;
    }
    out.c[i] = cosine(a, b, d);
  }
  return out;
}

inline ConsistencyScores consistency_scores(const ParamStore& store,
                                            const KnowledgeGraph& kg, double p_k,
                                            Rng& rng) {
  KgMask m1 = sample_kg_mask(kg, p_k, rng);
  KgMask m2 = sample_kg_mask(kg, p_k, rng);
  Mat v1 = aggregate_items(store, kg, &m1.keep).items;
  Mat v2 = aggregate_items(store, kg, &m2.keep).items;
  return consistency_from_views(v1, v2);
}

// Per-edge keep probabilities derived from item consistency:
//   w = exp(c_i);  p' = max((w - w_min)/(w_max - w_min), p_tau)
//   p = clamp(p_a * mean(p') * p', 0, 1)
// High-consistency items keep their interaction edges with higher
// probability. When all w coincide the normalized term is defined as 1.
// Intermediates are retained for inspection.
struct EdgeDropProbs {
  std::vector<double> p;        // keep probability per edge
  std::vector<double> w;        // exp(c_i) per edge
  std::vector<double> p_prime;  // truncated min-max normalization
  double mu_p_prime = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
};

inline EdgeDropProbs edge_keep_probs(const ConsistencyScores& c,
                                     const InteractionGraph& graph, double p_tau,
                                     double p_a) {
  if (p_tau <= 0.0 || p_tau > 1.0) throw std::invalid_argument("p_tau must be in (0,1]");
  if (p_a <= 0.0 || p_a > 1.0) throw std::invalid_argument("p_a must be in (0,1]");
  if (graph.edges.empty()) throw std::invalid_argument("graph has no edges");
  if (c.c.size() != graph.num_items)
    throw std::invalid_argument("consistency score count mismatch");

  EdgeDropProbs out;
  const std::size_t n = graph.edges.size();
  out.w.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.w[k] = std::exp(c.c[graph.edges[k].second]);
  out.w_min = *std::min_element(out.w.begin(), out.w.end());
  out.w_max = *std::max_element(out.w.begin(), out.w.end());
  const double range = out.w_max - out.w_min;

  out.p_prime.resize(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double norm = range > 0.0 ? (out.w[k] - out.w_min) / range : 1.0;
    out.p_prime[k] = std::max(norm, p_tau);
    sum += out.p_prime[k];
  }
  out.mu_p_prime = sum / static_cast<double>(n);

  out.p.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    out.p[k] = std::clamp(p_a * out.mu_p_prime * out.p_prime[k], 0.0, 1.0);
  return out;
}

struct UiMask {
  EdgeMask keep;  // 1 = edge retained
};

// Bernoulli per edge. With invert set, the probabilities are read as dropout
// rates instead of keep rates (the literal text reading, for comparison).
inline UiMask sample_ui_mask(const EdgeDropProbs& probs, Rng& rng,
                             bool invert = false) {
  UiMask m;
  m.keep.resize(probs.p.size());
  for (std::size_t k = 0; k < probs.p.size(); ++k) {
    double keep_p = invert ? 1.0 - probs.p[k] : probs.p[k];
    m.keep[k] = rand_bernoulli(rng, keep_p) ? 1 : 0;
  }
  return m;
}

struct AugmentConfig {
  double p_k = 0.1;
  double p_tau = 0.7;
  double p_a = 0.7;
  bool invert_keep_prob = false;
  bool uniform_edge_drop = false;  // ablation: matched-rate unguided dropout
};

// Two correlated (KG mask, interaction mask) views plus the consistency
// scores that guided them. The two KG masks drawn for the consistency
// estimate are reused as the views' KG sides.
struct AugmentedViewPair {
  KgMask kg1, kg2;
  UiMask ui1, ui2;
  ConsistencyScores consistency;
  EdgeDropProbs probs;
};

inline AugmentedViewPair make_view_pair(const ParamStore& store,
                                        const KnowledgeGraph& kg,
                                        const InteractionGraph& graph,
                                        const AugmentConfig& cfg, Rng& rng) {
  AugmentedViewPair out;
  out.kg1 = sample_kg_mask(kg, cfg.p_k, rng);
  out.kg2 = sample_kg_mask(kg, cfg.p_k, rng);
  Mat v1 = aggregate_items(store, kg, &out.kg1.keep).items;
  Mat v2 = aggregate_items(store, kg, &out.kg2.keep).items;
  out.consistency = consistency_from_views(v1, v2);
  out.probs = edge_keep_probs(out.consistency, graph, cfg.p_tau, cfg.p_a);
  if (cfg.uniform_edge_drop) {
    // Same expected number of retained edges, no item guidance.
    double mean =
        std::accumulate(out.probs.p.begin(), out.probs.p.end(), 0.0) /
        static_cast<double>(out.probs.p.size());
    std::fill(out.probs.p.begin(), out.probs.p.end(), mean);
  }
  out.ui1 = sample_ui_mask(out.probs, rng, cfg.invert_keep_prob);
  out.ui2 = sample_ui_mask(out.probs, rng, cfg.invert_keep_prob);
  return out;
}

}  // namespace kgcl
