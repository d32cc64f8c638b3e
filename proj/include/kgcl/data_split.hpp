#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcl/interaction_graph.hpp"
#include "kgcl/knowledge_graph.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

constexpr int kNoGroup = -1;

// Train graph plus per-user held-out items. Group labels are optional and
// attached by the sparse-user / long-tail study operations.
struct DataSplit {
  InteractionGraph train;
  std::vector<std::vector<std::uint32_t>> test;  // per-user, sorted
  std::vector<int> user_group;                   // empty or size num_users
  std::vector<int> item_group;                   // empty or size num_items

  std::size_t num_test_users() const {
    std::size_t n = 0;
    for (const auto& t : test) n += t.empty() ? 0 : 1;
    return n;
  }

  void validate() const {
    if (test.size() != train.num_users)
      throw std::invalid_argument("test list size must equal num_users");
    for (std::size_t u = 0; u < test.size(); ++u) {
      if (test[u].empty()) continue;
      if (train.user_degree(static_cast<std::uint32_t>(u)) == 0)
        throw std::invalid_argument("test user " + std::to_string(u) +
                                    " has no train edges");
      for (std::uint32_t i : test[u]) {
        if (i >= train.num_items)
          throw std::invalid_argument("test item id out of range");
        if (train.has_edge(static_cast<std::uint32_t>(u), i))
          throw std::invalid_argument("test edge also present in train");
      }
    }
  }
};

// Per-user random holdout. Keeps at least one train edge per user, so users
// with a single interaction contribute no test items.
inline DataSplit holdout_split(const InteractionGraph& full, double test_fraction,
                               Rng& rng) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0)
    throw std::invalid_argument("test_fraction must be in (0,1)");
  DataSplit split;
  split.test.assign(full.num_users, {});
  std::vector<Edge> train_edges;
  train_edges.reserve(full.edges.size());
  for (std::size_t u = 0; u < full.num_users; ++u) {
    auto uu = static_cast<std::uint32_t>(u);
    std::vector<std::uint32_t> items(full.user_items_begin(uu), full.user_items_end(uu));
    if (items.empty()) continue;
    shuffle(items, rng);
    std::size_t n_test = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(items.size())));
    n_test = std::min(n_test, items.size() - 1);
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (k < n_test)
        split.test[u].push_back(items[k]);
      else
        train_edges.emplace_back(uu, items[k]);
    }
    std::sort(split.test[u].begin(), split.test[u].end());
  }
  split.train = make_interaction_graph(full.num_users, full.num_items,
                                       std::move(train_edges))
                    .graph;
  return split;
}

// Group 0 = sparse (train degree < threshold), group 1 = dense.
inline constexpr int kSparseGroup = 0;
inline constexpr int kDenseGroup = 1;

inline DataSplit split_sparse_users(DataSplit split, std::size_t threshold) {
  if (threshold < 1) throw std::invalid_argument("threshold must be >= 1");
  split.user_group.assign(split.train.num_users, kDenseGroup);
  for (std::size_t u = 0; u < split.train.num_users; ++u)
    if (split.train.user_degree(static_cast<std::uint32_t>(u)) < threshold)
      split.user_group[u] = kSparseGroup;
  return split;
}

// Items sorted by train degree ascending (ties by id), partitioned into
// num_groups contiguous groups of floor(n/g) items; the last group absorbs
// the remainder. Group 0 is the sparsest.
inline DataSplit split_longtail_items(DataSplit split, std::size_t num_groups) {
  if (num_groups < 2) throw std::invalid_argument("num_groups must be >= 2");
  std::size_t n = split.train.num_items;
  if (num_groups > n) throw std::invalid_argument("num_groups exceeds item count");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto da = split.train.item_degree(a), db = split.train.item_degree(b);
    return da != db ? da < db : a < b;
  });
  split.item_group.assign(n, kNoGroup);
  std::size_t base = n / num_groups;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t g = std::min(k / base, num_groups - 1);
    split.item_group[order[k]] = static_cast<int>(g);
  }
  return split;
}

// Entities ranked by triple frequency ascending; the bottom tail_fraction are
// long-tail. The test set is restricted to items connected to at least one
// long-tail entity.
inline DataSplit longtail_entity_filter(const KnowledgeGraph& kg, DataSplit split,
                                        double tail_fraction) {
  if (tail_fraction <= 0.0 || tail_fraction >= 1.0)
    throw std::invalid_argument("tail_fraction must be in (0,1)");
  std::vector<std::size_t> freq(kg.num_entities, 0);
  for (const Triple& t : kg.triples) {
    if (t.head >= kg.num_items) ++freq[t.head];
    ++freq[t.tail];
  }
  std::vector<std::uint32_t> ents;
  for (std::size_t e = kg.num_items; e < kg.num_entities; ++e)
    if (freq[e] > 0) ents.push_back(static_cast<std::uint32_t>(e));
  if (ents.empty()) throw std::invalid_argument("KG has no non-item entities");
  std::sort(ents.begin(), ents.end(), [&](std::uint32_t a, std::uint32_t b) {
    return freq[a] != freq[b] ? freq[a] < freq[b] : a < b;
  });
  std::size_t k = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(ents.size())));
  std::vector<std::uint8_t> longtail(kg.num_entities, 0);
  for (std::size_t j = 0; j < k; ++j) longtail[ents[j]] = 1;

  std::vector<std::uint8_t> item_keeps(kg.num_items, 0);
  for (std::size_t i = 0; i < kg.num_items; ++i) {
    for (std::size_t p = kg.item_offsets[i]; p < kg.item_offsets[i + 1]; ++p)
      if (longtail[kg.nbr_entity[p]]) {
        item_keeps[i] = 1;
        break;
      }
  }
  std::size_t kept = 0;
  for (auto& t : split.test) {
    std::vector<std::uint32_t> filtered;
    for (std::uint32_t i : t)
      if (i < item_keeps.size() && item_keeps[i]) filtered.push_back(i);
    kept += filtered.size();
    t = std::move(filtered);
  }
  if (kept == 0)
    throw std::runtime_error(
        "long-tail entity filter emptied the test set; use a larger tail fraction");
  return split;
}

// test.txt shares the interaction format.
inline std::vector<std::vector<std::uint32_t>> load_test_items(const std::string& path,
                                                               std::size_t num_users) {
  InteractionLoadResult r = load_interactions(path);
  std::vector<std::vector<std::uint32_t>> out(num_users);
  for (const Edge& e : r.graph.edges) {
    if (e.first >= num_users)
      throw std::runtime_error("test user id out of range: " + std::to_string(e.first));
    out[e.first].push_back(e.second);
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

inline void save_test_items(const std::vector<std::vector<std::uint32_t>>& test,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write test file: " + path);
  for (std::size_t u = 0; u < test.size(); ++u) {
    if (test[u].empty()) continue;
    out << u;
    for (std::uint32_t i : test[u]) out << ' ' << i;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kgcl
