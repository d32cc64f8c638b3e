#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kgcl/cf_encoder.hpp"
#include "kgcl/data_split.hpp"

namespace kgcl {

inline double recall_at(const std::vector<std::uint32_t>& ranked,
                        const std::vector<std::uint32_t>& relevant_sorted,
                        std::size_t n) {
  if (relevant_sorted.empty()) throw std::invalid_argument("empty relevant set");
  std::size_t hits = 0;
  std::size_t top = std::min(n, ranked.size());
  for (std::size_t k = 0; k < top; ++k)
    if (std::binary_search(relevant_sorted.begin(), relevant_sorted.end(), ranked[k]))
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(relevant_sorted.size());
}

// Binary relevance, 1/log2(k+1) discount with 1-based ranks.
inline double ndcg_at(const std::vector<std::uint32_t>& ranked,
                      const std::vector<std::uint32_t>& relevant_sorted,
                      std::size_t n) {
  if (relevant_sorted.empty()) throw std::invalid_argument("empty relevant set");
  double dcg = 0.0;
  std::size_t top = std::min(n, ranked.size());
  for (std::size_t k = 0; k < top; ++k)
    if (std::binary_search(relevant_sorted.begin(), relevant_sorted.end(), ranked[k]))
      dcg += 1.0 / std::log2(static_cast<double>(k) + 2.0);
  double idcg = 0.0;
  std::size_t ideal = std::min(relevant_sorted.size(), n);
  for (std::size_t k = 0; k < ideal; ++k)
    idcg += 1.0 / std::log2(static_cast<double>(k) + 2.0);
  return dcg / idcg;
}

struct GroupMetrics {
  double recall = 0.0;
  double ndcg = 0.0;
  std::size_t user_count = 0;
};

struct RankingMetrics {
  double recall = 0.0;
  double ndcg = 0.0;
  std::size_t n = 0;
  std::size_t user_count = 0;
  std::map<int, GroupMetrics> per_group;  // keyed by user group when labeled
};

struct EvalFilter {
  std::optional<int> user_group;
  std::optional<int> item_group;  // restricts the relevant sets
};

// All-ranking evaluation: per test user, every non-train item is ranked and
// Recall@n / NDCG@n averaged over users. Users with empty (possibly
// filtered) test sets are skipped.
inline RankingMetrics evaluate(const PropagationOutput& out, const DataSplit& split,
                               std::size_t n, const EvalFilter& filter = {}) {
  RankingMetrics m;
  m.n = n;
  double sum_recall = 0.0, sum_ndcg = 0.0;
  std::map<int, GroupMetrics> groups;
  for (std::size_t u = 0; u < split.test.size(); ++u) {
    if (split.test[u].empty()) continue;
    if (filter.user_group &&
        (split.user_group.empty() || split.user_group[u] != *filter.user_group))
      continue;
    std::vector<std::uint32_t> relevant;
    if (filter.item_group) {
      if (split.item_group.empty()) continue;
      for (std::uint32_t i : split.test[u])
        if (split.item_group[i] == *filter.item_group) relevant.push_back(i);
      if (relevant.empty()) continue;
    } else {
      relevant = split.test[u];
    }
    auto uu = static_cast<std::uint32_t>(u);
    std::vector<std::uint32_t> ranked = score_all(out, uu, split.train);
    double r = recall_at(ranked, relevant, n);
    double g = ndcg_at(ranked, relevant, n);
    sum_recall += r;
    sum_ndcg += g;
    m.user_count += 1;
    if (!split.user_group.empty() && !filter.user_group) {
      GroupMetrics& gm = groups[split.user_group[u]];
      gm.recall += r;
      gm.ndcg += g;
      gm.user_count += 1;
    }
  }
  if (m.user_count == 0) throw std::runtime_error("no users matched the evaluation filter");
  m.recall = sum_recall / static_cast<double>(m.user_count);
  m.ndcg = sum_ndcg / static_cast<double>(m.user_count);
  for (auto& [gid, gm] : groups) {
    gm.recall /= static_cast<double>(gm.user_count);
    gm.ndcg /= static_cast<double>(gm.user_count);
  }
  m.per_group = std::move(groups);
  return m;
}

}  // namespace kgcl
