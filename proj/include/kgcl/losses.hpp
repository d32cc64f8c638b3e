#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kgcl/augment.hpp"
#include "kgcl/cf_encoder.hpp"
#include "kgcl/interaction_graph.hpp"
#include "kgcl/kg_encoder.hpp"
#include "kgcl/knowledge_graph.hpp"
#include "kgcl/matrix.hpp"
#include "kgcl/params.hpp"

namespace kgcl {

enum class NegativeScope { InBatch, Full };

struct InfonceConfig {
  double tau = 0.2;
  NegativeScope scope = NegativeScope::InBatch;
  bool include_positive_in_denominator = false;  // printed form excludes it
  bool mixed_negatives = false;                  // cross-type negative pool
};

namespace detail {

// One anchor type. Anchors live in `anchor_mat` (view 1), the pool in
// `pool_mat` (view 2). `pool_ids` must contain every anchor id; with mixed
// negatives an extra pool segment without positives is added. Gradients are
// accumulated into the final-embedding grad mats scaled by `weight`.
struct InfoncePool {
  const Mat* anchor_mat = nullptr;
  const Mat* pool_mat = nullptr;
  Mat* grad_anchor = nullptr;
  Mat* grad_pool = nullptr;
  const std::vector<std::uint32_t>* anchors = nullptr;
  const std::vector<std::uint32_t>* pool_ids = nullptr;  // nullptr = full range
  const Mat* extra_pool_mat = nullptr;                   // mixed negatives
  Mat* grad_extra_pool = nullptr;
  const std::vector<std::uint32_t>* extra_pool_ids = nullptr;
};

inline double infonce_pool(const InfoncePool& p, const InfonceConfig& cfg,
                           double weight) {
  const std::size_t d = p.anchor_mat->cols;
  const double inv_tau = 1.0 / cfg.tau;

  auto pool_size = [&](const std::vector<std::uint32_t>* ids, const Mat* m) {
    return ids ? ids->size() : (m ? m->rows : 0);
  };
  auto pool_id = [&](const std::vector<std::uint32_t>* ids, std::size_t j) {
    return ids ? (*ids)[j] : static_cast<std::uint32_t>(j);
  };
  const std::size_t n_pool = pool_size(p.pool_ids, p.pool_mat);
  const std::size_t n_extra = pool_size(p.extra_pool_ids, p.extra_pool_mat);

  std::vector<double> pool_norm(n_pool), extra_norm(n_extra);
  for (std::size_t j = 0; j < n_pool; ++j)
    pool_norm[j] =
        std::max(norm2(p.pool_mat->row(pool_id(p.pool_ids, j)), d), 1e-12);
  for (std::size_t j = 0; j < n_extra; ++j)
    extra_norm[j] =
        std::max(norm2(p.extra_pool_mat->row(pool_id(p.extra_pool_ids, j)), d), 1e-12);

  std::vector<double> c_main(n_pool), c_extra(n_extra), ga_dir(d);
  double total = 0.0;
  for (std::uint32_t a : *p.anchors) {
    const double* xa = p.anchor_mat->row(a);
    double na = std::max(norm2(xa, d), 1e-12);

    double pos_c = 0.0;
    bool pos_found = false;
    double mx = -1e300;
    for (std::size_t j = 0; j < n_pool; ++j) {
      std::uint32_t m = pool_id(p.pool_ids, j);
      c_main[j] = dot(xa, p.pool_mat->row(m), d) / (na * pool_norm[j]);
      if (m == a) {
        pos_c = c_main[j];
        pos_found = true;
        if (!cfg.include_positive_in_denominator) continue;
      }
      mx = std::max(mx, c_main[j]);
    }
    for (std::size_t j = 0; j < n_extra; ++j) {
      c_extra[j] = dot(xa, p.extra_pool_mat->row(pool_id(p.extra_pool_ids, j)), d) /
                   (na * extra_norm[j]);
      mx = std::max(mx, c_extra[j]);
    }
    if (!pos_found) throw std::logic_error("anchor missing from its pool");
    if (mx == -1e300)
      throw std::invalid_argument("contrastive batch has an empty negative pool");

    double denom = 0.0;
    for (std::size_t j = 0; j < n_pool; ++j) {
      bool is_pos = pool_id(p.pool_ids, j) == a;
      if (is_pos && !cfg.include_positive_in_denominator) continue;
      denom += std::exp((c_main[j] - mx) * inv_tau);
    }
    for (std::size_t j = 0; j < n_extra; ++j)
      denom += std::exp((c_extra[j] - mx) * inv_tau);
    total += -pos_c * inv_tau + std::log(denom) + mx * inv_tau;

    // d(loss)/d(cosine): -1/tau on the positive, softmax weights / tau on
    // the denominator terms. d cos(a,b)/da = (b/|b| - cos * a/|a|) / |a|.
    double* ga = p.grad_anchor->row(a);
    double a_dot_sum = 0.0;
    std::fill(ga_dir.begin(), ga_dir.end(), 0.0);
    auto add_pool_grad = [&](const Mat& mat, Mat& gmat, std::uint32_t m, double c,
                             double coef, double nb) {
      if (coef == 0.0) return;
      const double* xb = mat.row(m);
      double* gb = gmat.row(m);
      const double wc = weight * coef;
      for (std::size_t k = 0; k < d; ++k) {
        gb[k] += wc * (xa[k] / na - c * xb[k] / nb) / nb;
        ga_dir[k] += coef * xb[k] / nb;
      }
      a_dot_sum += coef * c;
    };
    for (std::size_t j = 0; j < n_pool; ++j) {
      std::uint32_t m = pool_id(p.pool_ids, j);
      bool is_pos = m == a;
      double coef = 0.0;
      if (!is_pos || cfg.include_positive_in_denominator)
        coef += inv_tau * std::exp((c_main[j] - mx) * inv_tau) / denom;
      if (is_pos) coef -= inv_tau;
      add_pool_grad(*p.pool_mat, *p.grad_pool, m, c_main[j], coef, pool_norm[j]);
    }
    for (std::size_t j = 0; j < n_extra; ++j) {
      double coef = inv_tau * std::exp((c_extra[j] - mx) * inv_tau) / denom;
      add_pool_grad(*p.extra_pool_mat, *p.grad_extra_pool,
                    pool_id(p.extra_pool_ids, j), c_extra[j], coef, extra_norm[j]);
    }
    for (std::size_t k = 0; k < d; ++k)
      ga[k] += weight * (ga_dir[k] - a_dot_sum * xa[k] / na) / na;
  }
  return total;
}

}  // namespace detail

// InfoNCE over two propagated views. Each node's two view embeddings form
// the positive pair; negatives come from the second view, same-type pools by
// default. The positive term is excluded from the denominator unless
// configured otherwise, so per-node losses can be negative. Returns the mean
// over all anchors; gradients (times `weight`) are accumulated into the
// final-embedding grad mats of both views.
inline double infonce(const PropagationOutput& view1, const PropagationOutput& view2,
                      const std::vector<std::uint32_t>& user_batch,
                      const std::vector<std::uint32_t>& item_batch,
                      const InfonceConfig& cfg, Mat& grad_u1, Mat& grad_i1,
                      Mat& grad_u2, Mat& grad_i2, double weight = 1.0) {
  if (cfg.tau <= 0.0) throw std::invalid_argument("temperature must be > 0");
  const std::size_t n_anchors = user_batch.size() + item_batch.size();
  if (n_anchors == 0) throw std::invalid_argument("empty contrastive batch");
  if (cfg.scope == NegativeScope::InBatch && !cfg.mixed_negatives) {
    if (user_batch.size() == 1 || item_batch.size() == 1)
      throw std::invalid_argument(
          "in-batch negatives need at least 2 nodes per contrasted type");
  }
  const double inv_n = 1.0 / static_cast<double>(n_anchors);
  const bool in_batch = cfg.scope == NegativeScope::InBatch;

  double total = 0.0;
  if (!user_batch.empty()) {
    detail::InfoncePool p;
    p.anchor_mat = &view1.user_final;
    p.pool_mat = &view2.user_final;
    p.grad_anchor = &grad_u1;
    p.grad_pool = &grad_u2;
    p.anchors = &user_batch;
    p.pool_ids = in_batch ? &user_batch : nullptr;
    if (cfg.mixed_negatives) {
      p.extra_pool_mat = &view2.item_final;
      p.grad_extra_pool = &grad_i2;
      p.extra_pool_ids = in_batch ? &item_batch : nullptr;
    }
    total += detail::infonce_pool(p, cfg, weight * inv_n);
  }
  if (!item_batch.empty()) {
    detail::InfoncePool p;
    p.anchor_mat = &view1.item_final;
    p.pool_mat = &view2.item_final;
    p.grad_anchor = &grad_i1;
    p.grad_pool = &grad_i2;
    p.anchors = &item_batch;
    p.pool_ids = in_batch ? &item_batch : nullptr;
    if (cfg.mixed_negatives) {
      p.extra_pool_mat = &view2.user_final;
      p.grad_extra_pool = &grad_u2;
      p.extra_pool_ids = in_batch ? &user_batch : nullptr;
    }
    total += detail::infonce_pool(p, cfg, weight * inv_n);
  }
  return total * inv_n;
}

// ---------------------------------------------------------------------------

struct BprTriple {
  std::uint32_t user = 0;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

// Mean over triples of -log sigma(y_pos - y_neg). Preconditions (pos
// interacted, neg not) are always validated. Gradients land on the final
// embeddings.
inline double bpr_loss(const PropagationOutput& out,
                       const std::vector<BprTriple>& triples,
                       const InteractionGraph& train, Mat& grad_user_final,
                       Mat& grad_item_final, double weight = 1.0) {
  if (triples.empty()) throw std::invalid_argument("empty BPR batch");
  const std::size_t d = out.user_final.cols;
  const double inv_n = 1.0 / static_cast<double>(triples.size());
  double total = 0.0;
  for (const BprTriple& t : triples) {
    if (!train.has_edge(t.user, t.pos))
      throw std::invalid_argument("BPR positive is not a train interaction");
    if (train.has_edge(t.user, t.neg))
      throw std::invalid_argument("BPR negative is a train interaction");
    const double* fu = out.user_final.row(t.user);
    const double* fp = out.item_final.row(t.pos);
    const double* fn = out.item_final.row(t.neg);
    double diff = dot(fu, fp, d) - dot(fu, fn, d);
    total += -log_sigmoid(diff);
    double g = (sigmoid(diff) - 1.0) * inv_n * weight;
    double* gu = grad_user_final.row(t.user);
    double* gp = grad_item_final.row(t.pos);
    double* gn = grad_item_final.row(t.neg);
    for (std::size_t k = 0; k < d; ++k) {
      gu[k] += g * (fp[k] - fn[k]);
      gp[k] += g * fu[k];
      gn[k] -= g * fu[k];
    }
  }
  return total * inv_n;
}

// ---------------------------------------------------------------------------

struct LossBreakdown {
  double total = 0.0;
  double bpr = 0.0;
  double contrastive = 0.0;
  double transe = 0.0;
  double l2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double tau = 0.0;
};

struct JointLossConfig {
  double lambda1 = 0.1;
  double lambda2 = 1e-4;
  std::size_t layers = 3;
  InfonceConfig infonce;
};

// Full objective for one batch: BPR on the full graphs, InfoNCE between the
// two augmented views, L2 on the embedding-table rows the batch touches.
// All gradients are accumulated into the store.
inline LossBreakdown joint_loss(ParamStore& store, const InteractionGraph& graph,
                                const KnowledgeGraph& kg,
                                const AugmentedViewPair& views,
                                const std::vector<BprTriple>& batch,
                                const JointLossConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const std::size_t d = store.dims.dim;

  std::vector<std::uint32_t> users, items;
  users.reserve(batch.size());
  items.reserve(2 * batch.size());
  for (const BprTriple& t : batch) {
    users.push_back(t.user);
    items.push_back(t.pos);
    items.push_back(t.neg);
  }
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());

  LossBreakdown out;
  out.lambda1 = cfg.lambda1;
  out.lambda2 = cfg.lambda2;
  out.tau = cfg.infonce.tau;

  // Main recommendation task on the unmasked graphs.
  {
    KgAggregate agg = aggregate_items(store, kg, nullptr);
    PropagationOutput prop =
        propagate(store.user_emb, agg.items, graph, nullptr, cfg.layers);
    Mat gu(graph.num_users, d), gi(graph.num_items, d);
    out.bpr = bpr_loss(prop, batch, graph, gu, gi);
    Mat gu0, gi0;
    propagate_backward(gu, gi, graph, nullptr, cfg.layers, gu0, gi0);
    for (std::size_t k = 0; k < gu0.data.size(); ++k)
      store.g_user.data[k] += gu0.data[k];
    aggregate_items_backward(store, kg, agg.attn, gi0);
  }

  // Contrastive task between the two augmented views.
  if (cfg.lambda1 != 0.0) {
    KgAggregate agg1 = aggregate_items(store, kg, &views.kg1.keep);
    KgAggregate agg2 = aggregate_items(store, kg, &views.kg2.keep);
    PropagationOutput prop1 =
        propagate(store.user_emb, agg1.items, graph, &views.ui1.keep, cfg.layers);
    PropagationOutput prop2 =
        propagate(store.user_emb, agg2.items, graph, &views.ui2.keep, cfg.layers);
    Mat gu1(graph.num_users, d), gi1(graph.num_items, d);
    Mat gu2(graph.num_users, d), gi2(graph.num_items, d);
    out.contrastive = infonce(prop1, prop2, users, items, cfg.infonce, gu1, gi1,
                              gu2, gi2, cfg.lambda1);
    Mat gu0, gi0;
    propagate_backward(gu1, gi1, graph, &views.ui1.keep, cfg.layers, gu0, gi0);
    for (std::size_t k = 0; k < gu0.data.size(); ++k)
      store.g_user.data[k] += gu0.data[k];
    aggregate_items_backward(store, kg, agg1.attn, gi0);
    propagate_backward(gu2, gi2, graph, &views.ui2.keep, cfg.layers, gu0, gi0);
    for (std::size_t k = 0; k < gu0.data.size(); ++k)
      store.g_user.data[k] += gu0.data[k];
    aggregate_items_backward(store, kg, agg2.attn, gi0);
  }

  // L2 on the raw embedding rows touched by the batch.
  for (std::uint32_t u : users) {
    out.l2 += sq_norm(store.user_emb.row(u), d);
    if (cfg.lambda2 != 0.0)
      axpy(2.0 * cfg.lambda2, store.user_emb.row(u), store.g_user.row(u), d);
  }
  for (std::uint32_t i : items) {
    out.l2 += sq_norm(store.entity_emb.row(i), d);
    if (cfg.lambda2 != 0.0)
      axpy(2.0 * cfg.lambda2, store.entity_emb.row(i), store.g_entity.row(i), d);
  }

  out.total = out.bpr + cfg.lambda1 * out.contrastive + cfg.lambda2 * out.l2;
  return out;
}

// ---------------------------------------------------------------------------
// Contrastive gradient magnitude g(s) = sqrt(1 - s^2) * exp(s / tau) and its
// maximum on (0, 1), found by solving s / (1 - s^2) = 1 / tau.

inline double contrastive_gradient(double s, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("temperature must be > 0");
  if (s < -1.0 || s > 1.0) throw std::invalid_argument("similarity must be in [-1,1]");
  return std::sqrt(1.0 - s * s) * std::exp(s / tau);
}

struct GradientCurve {
  std::vector<std::pair<double, double>> points;  // (s, g(s))
  double s0 = 0.0;                                // argmax of g on (0,1)
  double g0 = 0.0;
};

inline double gradient_curve_peak(double tau) {
  if (tau <= 0.0) throw std::invalid_argument("temperature must be > 0");
  // h(s) = s/(1-s^2) - 1/tau is strictly increasing on (0,1): bisection.
  double lo = 0.0, hi = 1.0 - 1e-15;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double h = mid / (1.0 - mid * mid) - 1.0 / tau;
    if (h < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

inline GradientCurve gradient_curve(double tau, const std::vector<double>& s_grid) {
  GradientCurve out;
  out.points.reserve(s_grid.size());
  for (double s : s_grid) out.points.emplace_back(s, contrastive_gradient(s, tau));
  out.s0 = gradient_curve_peak(tau);
  out.g0 = contrastive_gradient(out.s0, tau);
  return out;
}

}  // namespace kgcl
