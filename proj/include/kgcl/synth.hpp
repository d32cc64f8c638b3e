#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcl/data_split.hpp"
#include "kgcl/interaction_graph.hpp"
#include "kgcl/knowledge_graph.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

// Latent-factor world: users and items get latent vectors, interactions are
// sampled by preference softmax, and each item is linked to concept entities
// shared with latent-similar items. A fraction of items additionally get
// uniformly random entity links, with ground-truth noise labels kept -- the
// oracle that real datasets lack.
struct SynthConfig {
  std::size_t num_users = 2000;
  std::size_t num_items = 500;
  std::size_t latent_dim = 8;
  std::size_t edges_per_user = 12;
  std::size_t relevant_entities_per_item = 3;
  std::size_t noise_entities_per_item = 8;
  double noise_item_fraction = 0.2;
  double test_fraction = 0.25;
  std::size_t num_concepts = 64;
  std::size_t num_noise_entities = 200;
  std::size_t num_relations = 4;
  double preference_sharpness = 3.0;

  void validate() const {
    if (num_users == 0 || num_items == 0) throw std::invalid_argument("empty vocabulary");
    if (latent_dim == 0) throw std::invalid_argument("latent_dim must be >= 1");
    if (edges_per_user > num_items)
      throw std::invalid_argument("edges_per_user exceeds num_items");
    if (relevant_entities_per_item > num_concepts)
      throw std::invalid_argument("relevant_entities_per_item exceeds num_concepts");
    if (noise_item_fraction < 0.0 || noise_item_fraction > 1.0)
      throw std::invalid_argument("noise_item_fraction must be in [0,1]");
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
      throw std::invalid_argument("test_fraction must be in (0,1)");
  }
};

struct SynthData {
  InteractionGraph graph;  // full pre-split graph
  KnowledgeGraph kg;
  DataSplit split;
  std::vector<std::uint8_t> triple_is_noise;  // aligned with kg.triples
  std::vector<std::uint8_t> item_has_noise;   // per item
};

inline SynthData synth_generate(const SynthConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t k = cfg.latent_dim;
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));

  std::vector<double> user_z(cfg.num_users * k);
  std::vector<double> item_z(cfg.num_items * k);
  std::vector<double> concept_z(cfg.num_concepts * k);
  for (double& v : user_z) v = rand_normal(rng);
  for (double& v : item_z) v = rand_normal(rng);
  for (double& v : concept_z) v = rand_normal(rng);

  // Interactions: edges_per_user categorical draws per user, then dedup.
  std::vector<Edge> raw_edges;
  raw_edges.reserve(cfg.num_users * cfg.edges_per_user);
  std::vector<double> cum(cfg.num_items);
  for (std::size_t u = 0; u < cfg.num_users; ++u) {
    const double* zu = &user_z[u * k];
    double max_s = -1e300;
    std::vector<double> s(cfg.num_items);
    for (std::size_t i = 0; i < cfg.num_items; ++i) {
      s[i] = cfg.preference_sharpness * inv_sqrt_k * dot(zu, &item_z[i * k], k);
      max_s = std::max(max_s, s[i]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.num_items; ++i) {
      total += std::exp(s[i] - max_s);
      cum[i] = total;
    }
    for (std::size_t e = 0; e < cfg.edges_per_user; ++e) {
      double x = rand_unit(rng) * total;
      std::size_t i = static_cast<std::size_t>(
          std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
      if (i >= cfg.num_items) i = cfg.num_items - 1;
      raw_edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
    }
  }
  InteractionGraph graph =
      make_interaction_graph(cfg.num_users, cfg.num_items, std::move(raw_edges)).graph;

  // Relevant triples: each item links to its most aligned concepts, so
  // latent-similar items share entities.
  std::vector<Triple> triples;
  for (std::size_t i = 0; i < cfg.num_items; ++i) {
    std::vector<std::uint32_t> order(cfg.num_concepts);
    std::iota(order.begin(), order.end(), 0);
    const double* zi = &item_z[i * k];
    std::vector<double> aff(cfg.num_concepts);
    for (std::size_t c = 0; c < cfg.num_concepts; ++c)
      aff[c] = dot(zi, &concept_z[c * k], k);
    std::partial_sort(order.begin(), order.begin() + cfg.relevant_entities_per_item,
                      order.end(), [&](std::uint32_t a, std::uint32_t b) {
                        return aff[a] != aff[b] ? aff[a] > aff[b] : a < b;
                      });
    for (std::size_t j = 0; j < cfg.relevant_entities_per_item; ++j) {
      std::uint32_t c = order[j];
      triples.push_back(Triple{static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(c % cfg.num_relations),
                               static_cast<std::uint32_t>(cfg.num_items + c)});
    }
  }

  // Noise triples: uniformly random entity links on a random item subset.
  const std::size_t num_entities =
      cfg.num_items + cfg.num_concepts + cfg.num_noise_entities;
  std::vector<std::uint32_t> item_order(cfg.num_items);
  std::iota(item_order.begin(), item_order.end(), 0);
  shuffle(item_order, rng);
  std::size_t n_noisy = static_cast<std::size_t>(
      std::ceil(cfg.noise_item_fraction * static_cast<double>(cfg.num_items)));
  std::vector<std::uint8_t> item_has_noise(cfg.num_items, 0);
  std::vector<Triple> sorted_existing = triples;
  std::sort(sorted_existing.begin(), sorted_existing.end());
  std::vector<Triple> noise_triples;
  for (std::size_t j = 0; j < n_noisy; ++j) {
    std::uint32_t i = item_order[j];
    item_has_noise[i] = 1;
    std::size_t made = 0;
    while (made < cfg.noise_entities_per_item) {
      Triple t;
      t.head = i;
      t.relation = static_cast<std::uint32_t>(rand_index(rng, cfg.num_relations));
      t.tail = static_cast<std::uint32_t>(
          cfg.num_items + rand_index(rng, cfg.num_concepts + cfg.num_noise_entities));
      if (std::binary_search(sorted_existing.begin(), sorted_existing.end(), t)) continue;
      if (std::find(noise_triples.begin(), noise_triples.end(), t) != noise_triples.end())
        continue;
      noise_triples.push_back(t);
      ++made;
    }
  }

  std::vector<Triple> all = triples;
  all.insert(all.end(), noise_triples.begin(), noise_triples.end());
  KnowledgeGraph kg = make_knowledge_graph(cfg.num_items, std::move(all), num_entities,
                                           cfg.num_relations)
                          .kg;
  std::sort(noise_triples.begin(), noise_triples.end());
  std::vector<std::uint8_t> triple_is_noise(kg.triples.size(), 0);
  for (std::size_t t = 0; t < kg.triples.size(); ++t)
    if (std::binary_search(noise_triples.begin(), noise_triples.end(), kg.triples[t]))
      triple_is_noise[t] = 1;

  SynthData out;
  out.split = holdout_split(graph, cfg.test_fraction, rng);
  out.graph = std::move(graph);
  out.kg = std::move(kg);
  out.triple_is_noise = std::move(triple_is_noise);
  out.item_has_noise = std::move(item_has_noise);
  return out;
}

inline void save_noise_labels(const KnowledgeGraph& kg,
                              const std::vector<std::uint8_t>& labels,
                              const std::string& path) {
  if (labels.size() != kg.triples.size())
    throw std::invalid_argument("label count must match triple count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write noise labels: " + path);
  for (std::size_t t = 0; t < kg.triples.size(); ++t)
    out << kg.triples[t].head << ' ' << kg.triples[t].relation << ' '
        << kg.triples[t].tail << ' ' << int(labels[t]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kgcl
