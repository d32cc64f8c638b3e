#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgcl {

using Edge = std::pair<std::uint32_t, std::uint32_t>;  // (user, item)

// 1 = edge retained. Indexed by the graph's canonical edge order.
using EdgeMask = std::vector<std::uint8_t>;

// Bipartite user-item graph. Edges are stored sorted by (user, item) and
// deduplicated, so the user->items CSR is implicit in the edge array; the
// item->users side carries the originating edge index so masks can be
// looked up from either direction.
struct InteractionGraph {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::vector<Edge> edges;

  std::vector<std::size_t> user_offsets;  // size num_users + 1, into edges
  std::vector<std::size_t> item_offsets;  // size num_items + 1
  std::vector<std::uint32_t> item_users;
  std::vector<std::size_t> item_edge_ids;

  std::size_t user_degree(std::uint32_t u) const {
    return user_offsets[u + 1] - user_offsets[u];
  }
  std::size_t item_degree(std::uint32_t i) const {
    return item_offsets[i + 1] - item_offsets[i];
  }

  // Sorted items of user u.
  const std::uint32_t* user_items_begin(std::uint32_t u) const {
    return &edge_items_[user_offsets[u]];
  }
  const std::uint32_t* user_items_end(std::uint32_t u) const {
    return &edge_items_[0] + user_offsets[u + 1];
  }

  bool has_edge(std::uint32_t u, std::uint32_t i) const {
    return std::binary_search(user_items_begin(u), user_items_end(u), i);
  }

  std::vector<std::uint32_t> edge_items_;  // edges[k].second, contiguous

  void build_index() {
    std::sort(edges.begin(), edges.end());
    user_offsets.assign(num_users + 1, 0);
    item_offsets.assign(num_items + 1, 0);
    edge_items_.resize(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      user_offsets[edges[k].first + 1]++;
      item_offsets[edges[k].second + 1]++;
      edge_items_[k] = edges[k].second;
    }
    for (std::size_t u = 0; u < num_users; ++u) user_offsets[u + 1] += user_offsets[u];
    for (std::size_t i = 0; i < num_items; ++i) item_offsets[i + 1] += item_offsets[i];
    item_users.resize(edges.size());
    item_edge_ids.resize(edges.size());
    std::vector<std::size_t> fill(item_offsets.begin(), item_offsets.end() - 1);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      std::size_t pos = fill[edges[k].second]++;
      item_users[pos] = edges[k].first;
      item_edge_ids[pos] = k;
    }
  }
};

struct InteractionLoadResult {
  InteractionGraph graph;
  std::size_t duplicate_count = 0;
};

// Deduplicates; returns the number of dropped duplicates.
inline InteractionLoadResult make_interaction_graph(std::size_t num_users,
                                                    std::size_t num_items,
                                                    std::vector<Edge> raw_edges) {
  for (const Edge& e : raw_edges) {
    if (e.first >= num_users || e.second >= num_items)
      throw std::invalid_argument("interaction edge id out of range");
  }
  std::sort(raw_edges.begin(), raw_edges.end());
  std::size_t before = raw_edges.size();
  raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()), raw_edges.end());
  InteractionLoadResult out;
  out.duplicate_count = before - raw_edges.size();
  out.graph.num_users = num_users;
  out.graph.num_items = num_items;
  out.graph.edges = std::move(raw_edges);
  out.graph.build_index();
  return out;
}

// Format: one line per user, `user_id item_id item_id ...`, whitespace
// separated non-negative integers. A user line with no items is legal and
// only raises the user-id bound.
inline InteractionLoadResult load_interactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interaction file: " + path);
  std::vector<Edge> raw;
  std::size_t max_user = 0, max_item = 0;
  bool any_user = false, any_item = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    bool first = true;
    std::uint32_t user = 0;
    while (ls >> tok) {
      unsigned long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed token '" + tok + "'");
      }
      if (first) {
        user = static_cast<std::uint32_t>(v);
        max_user = std::max(max_user, static_cast<std::size_t>(v));
        any_user = true;
        first = false;
      } else {
        max_item = std::max(max_item, static_cast<std::size_t>(v));
        any_item = true;
        raw.emplace_back(user, static_cast<std::uint32_t>(v));
      }
    }
  }
  if (!any_user) throw std::runtime_error("empty interaction file: " + path);
  return make_interaction_graph(max_user + 1, any_item ? max_item + 1 : 0,
                                std::move(raw));
}

inline void save_interactions(const InteractionGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write interaction file: " + path);
  for (std::size_t u = 0; u < g.num_users; ++u) {
    if (g.user_degree(static_cast<std::uint32_t>(u)) == 0) continue;
    out << u;
    for (const std::uint32_t* it = g.user_items_begin(static_cast<std::uint32_t>(u));
         it != g.user_items_end(static_cast<std::uint32_t>(u)); ++it)
      out << ' ' << *it;
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kgcl
