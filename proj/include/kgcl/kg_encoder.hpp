#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kgcl/knowledge_graph.hpp"
#include "kgcl/matrix.hpp"
#include "kgcl/params.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

constexpr double kLeakyReluSlope = 0.2;

// Per-item attention weights over surviving KG neighbors, CSR layout. The
// pre-activation scores are kept for the backward pass.
struct AttentionRecord {
  std::vector<std::size_t> offsets;  // num_items + 1
  std::vector<std::uint32_t> entity;
  std::vector<std::uint32_t> relation;
  std::vector<double> alpha;
  std::vector<double> pre;  // r . W[x_e || x_i], before LeakyReLU
};

struct KgAggregate {
  Mat items;  // num_items x d
  AttentionRecord attn;
};

namespace detail {

// z = W_e x_e + W_i x_i where attn_w = [W_e | W_i] (d x 2d, row-major).
inline void attn_transform(const Mat& attn_w, const double* xe, const double* xi,
                           double* z) {
  const std::size_t d = attn_w.rows;
  for (std::size_t r = 0; r < d; ++r) {
    const double* wr = attn_w.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += wr[c] * xe[c] + wr[d + c] * xi[c];
    z[r] = s;
  }
}

}  // namespace detail

// Items aggregate messages from their surviving KG neighbors:
//   out_i = x_i + sum_e alpha(e, r, i) x_e
//   alpha = softmax_e( LeakyReLU( r^T W [x_e || x_i] ) )
// Items with no surviving neighbors pass x_i through unchanged. The r^T W x_e
// and r^T W x_i halves are precomputed per (relation, entity) and
// (relation, item) pair via cached W-transforms of all referenced rows.
inline KgAggregate aggregate_items(const ParamStore& store, const KnowledgeGraph& kg,
                                   const TripleMask* mask = nullptr) {
  if (mask && mask->size() != kg.triples.size())
    throw std::invalid_argument("triple mask size mismatch");
  const std::size_t d = store.dims.dim;
  const std::size_t n_items = kg.num_items;

  KgAggregate out;
  out.items = Mat(n_items, d);
  AttentionRecord& attn = out.attn;
  attn.offsets.assign(n_items + 1, 0);

  // Cache We*x_e for every entity that appears as a neighbor, and Wi*x_i per
  // item; pre-scores are then one d-dot per neighbor.
  std::vector<double> ent_tf(store.entity_emb.rows * d);
  std::vector<std::uint8_t> ent_done(store.entity_emb.rows, 0);
  std::vector<double> zi(d);

  auto transform_half = [&](const double* x, std::size_t col0, double* z) {
    for (std::size_t r = 0; r < d; ++r) {
      const double* wr = store.attn_w.row(r);
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += wr[col0 + c] * x[c];
      z[r] = s;
    }
  };

  std::vector<double> scores;
  for (std::size_t i = 0; i < n_items; ++i) {
    const double* xi = store.entity_emb.row(i);
    double* row = out.items.row(i);
    for (std::size_t k = 0; k < d; ++k) row[k] = xi[k];

    scores.clear();
    std::size_t begin = attn.entity.size();
    transform_half(xi, d, zi.data());
    for (std::size_t p = kg.item_offsets[i]; p < kg.item_offsets[i + 1]; ++p) {
      if (mask && !(*mask)[kg.nbr_triple[p]]) continue;
      std::uint32_t e = kg.nbr_entity[p];
      std::uint32_t r = kg.nbr_relation[p];
      if (!ent_done[e]) {
        transform_half(store.entity_emb.row(e), 0, &ent_tf[e * d]);
        ent_done[e] = 1;
      }
      const double* xr = store.relation_emb.row(r);
      double pre = 0.0;
      const double* etf = &ent_tf[e * d];
      for (std::size_t k = 0; k < d; ++k) pre += xr[k] * (etf[k] + zi[k]);
      attn.entity.push_back(e);
      attn.relation.push_back(r);
      attn.pre.push_back(pre);
      scores.push_back(pre >= 0.0 ? pre : kLeakyReluSlope * pre);
    }
    attn.offsets[i + 1] = attn.entity.size();

    if (!scores.empty()) {
      double mx = scores[0];
      for (double s : scores) mx = std::max(mx, s);
      double total = 0.0;
      for (double& s : scores) {
        s = std::exp(s - mx);
        total += s;
      }
      for (std::size_t j = 0; j < scores.size(); ++j) {
        double a = scores[j] / total;
        attn.alpha.push_back(a);
        axpy(a, store.entity_emb.row(attn.entity[begin + j]), row, d);
      }
    }
  }
  return out;
}

// Accumulates d(loss)/d(params) into store.grads given d(loss)/d(out_i).
// Recomputes the per-neighbor transforms; parameters are unchanged between
// the forward and backward of a step so the replay is exact.
inline void aggregate_items_backward(ParamStore& store, const KnowledgeGraph& kg,
                                     const AttentionRecord& attn,
                                     const Mat& grad_items) {
  const std::size_t d = store.dims.dim;
  if (grad_items.rows != kg.num_items || grad_items.cols != d)
    throw std::invalid_argument("grad_items shape mismatch");
  std::vector<double> z(d), gz(d);
  for (std::size_t i = 0; i < kg.num_items; ++i) {
    const double* g = grad_items.row(i);
    // residual term
    axpy(1.0, g, store.g_entity.row(i), d);
    std::size_t lo = attn.offsets[i], hi = attn.offsets[i + 1];
    if (lo == hi) continue;

    const double* xi = store.entity_emb.row(i);
    // d(loss)/d(alpha_j), then softmax backward to pre-activation scores.
    double mean_term = 0.0;
    std::vector<double> ga(hi - lo);
    for (std::size_t p = lo; p < hi; ++p) {
      ga[p - lo] = dot(g, store.entity_emb.row(attn.entity[p]), d);
      mean_term += attn.alpha[p] * ga[p - lo];
    }
    for (std::size_t p = lo; p < hi; ++p) {
      std::uint32_t e = attn.entity[p];
      std::uint32_t r = attn.relation[p];
      double a = attn.alpha[p];
      // through the weighted sum
      axpy(a * 1.0, g, store.g_entity.row(e), d);
      double gs = a * (ga[p - lo] - mean_term);
      double q = gs * (attn.pre[p] >= 0.0 ? 1.0 : kLeakyReluSlope);
      if (q == 0.0) continue;

      const double* xe = store.entity_emb.row(e);
      const double* xr = store.relation_emb.row(r);
      detail::attn_transform(store.attn_w, xe, xi, z.data());
      // d/d r = q * z
      axpy(q, z.data(), store.g_relation.row(r), d);
      // d/d z = q * r, then through W into x_e, x_i and W itself
      for (std::size_t k = 0; k < d; ++k) gz[k] = q * xr[k];
      double* ge = store.g_entity.row(e);
      double* gi = store.g_entity.row(i);
      for (std::size_t rr = 0; rr < d; ++rr) {
        const double* wr = store.attn_w.row(rr);
        double* gwr = store.g_attn_w.row(rr);
        double gzr = gz[rr];
        for (std::size_t c = 0; c < d; ++c) {
          ge[c] += gzr * wr[c];
          gi[c] += gzr * wr[d + c];
          gwr[c] += gzr * xe[c];
          gwr[d + c] += gzr * xi[c];
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// TransE: f_d = ||x_h + x_r - x_t||_1, loss = -ln sigma(f_d(neg) - f_d(pos)).

inline std::vector<std::uint32_t> sample_negative_tails(std::size_t count,
                                                        std::size_t num_entities,
                                                        Rng& rng) {
  if (num_entities == 0) throw std::invalid_argument("empty entity vocabulary");
  std::vector<std::uint32_t> out(count);
  for (auto& t : out) t = static_cast<std::uint32_t>(rand_index(rng, num_entities));
  return out;
}

// Mean loss over the batch; gradients accumulated into store. The L1
// subgradient at exact zeros is taken as 0.
inline double transe_loss(ParamStore& store, const std::vector<Triple>& batch,
                          const std::vector<std::uint32_t>& neg_tails) {
  if (batch.empty()) throw std::invalid_argument("transe batch is empty");
  if (neg_tails.size() != batch.size())
    throw std::invalid_argument("negative tail count mismatch");
  const std::size_t d = store.dims.dim;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Triple& t = batch[b];
    std::uint32_t tn = neg_tails[b];
    const double* xh = store.entity_emb.row(t.head);
    const double* xr = store.relation_emb.row(t.relation);
    const double* xt = store.entity_emb.row(t.tail);
    const double* xn = store.entity_emb.row(tn);
    double f_pos = 0.0, f_neg = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      f_pos += std::fabs(xh[k] + xr[k] - xt[k]);
      f_neg += std::fabs(xh[k] + xr[k] - xn[k]);
    }
    double diff = f_neg - f_pos;
    total += -log_sigmoid(diff);
    double gdiff = (sigmoid(diff) - 1.0) * inv_n;  // d(loss)/d(diff), batch-mean
    double* gh = store.g_entity.row(t.head);
    double* gr = store.g_relation.row(t.relation);
    double* gt = store.g_entity.row(t.tail);
    double* gn = store.g_entity.row(tn);
    for (std::size_t k = 0; k < d; ++k) {
      double vp = xh[k] + xr[k] - xt[k];
      double vn = xh[k] + xr[k] - xn[k];
      double sp = vp > 0.0 ? 1.0 : (vp < 0.0 ? -1.0 : 0.0);
      double sn = vn > 0.0 ? 1.0 : (vn < 0.0 ? -1.0 : 0.0);
      // diff = f_neg - f_pos
      gh[k] += gdiff * (sn - sp);
      gr[k] += gdiff * (sn - sp);
      gt[k] += gdiff * sp;
      gn[k] -= gdiff * sn;
    }
  }
  return total * inv_n;
}

// One full pass over the KG triples in shuffled mini-batches, one Adam step
// per batch. Returns the mean per-triple loss; a no-op returning 0 when the
// KG is empty.
inline double transe_epoch(ParamStore& store, AdamState& adam,
                           const KnowledgeGraph& kg, std::size_t batch_size,
                           Rng& rng) {
  if (kg.triples.empty()) return 0.0;
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  std::vector<std::size_t> order(kg.triples.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  shuffle(order, rng);
  double total = 0.0;
  std::size_t done = 0;
  std::vector<Triple> batch;
  while (done < order.size()) {
    std::size_t n = std::min(batch_size, order.size() - done);
    batch.clear();
    for (std::size_t k = 0; k < n; ++k) batch.push_back(kg.triples[order[done + k]]);
    std::vector<std::uint32_t> negs = sample_negative_tails(n, kg.num_entities, rng);
    store.zero_grads();
    total += transe_loss(store, batch, negs) * static_cast<double>(n);
    adam_step(store, adam);
    done += n;
  }
  store.zero_grads();
  return total / static_cast<double>(order.size());
}

}  // namespace kgcl
