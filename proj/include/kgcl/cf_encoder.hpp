#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kgcl/interaction_graph.hpp"
#include "kgcl/matrix.hpp"

namespace kgcl {

// LightGCN propagation output. Finals are the arithmetic mean of layers
// 0..L; per-layer embeddings are retained.
struct PropagationOutput {
  Mat user_final;
  Mat item_final;
  std::vector<Mat> user_layers;
  std::vector<Mat> item_layers;
  std::size_t layers = 0;
};

// Linear message passing with symmetric normalization over the (masked)
// interaction graph:
//   x_u^{l+1} = sum_{i in N_u} x_i^l / sqrt(|N_u||N_i|)   (and vice versa)
// Degrees are taken from the masked view; nodes isolated by the mask
// receive zero at layers >= 1.
inline PropagationOutput propagate(const Mat& user0, const Mat& item0,
                                   const InteractionGraph& graph,
                                   const EdgeMask* mask, std::size_t layers) {
  if (layers < 1) throw std::invalid_argument("layer count must be >= 1");
  if (user0.rows != graph.num_users || item0.rows != graph.num_items)
    throw std::invalid_argument("layer-0 shape mismatch");
  if (user0.cols != item0.cols) throw std::invalid_argument("dimension mismatch");
  if (mask && mask->size() != graph.edges.size())
    throw std::invalid_argument("edge mask size mismatch");
  const std::size_t d = user0.cols;

  std::vector<double> coeff(graph.edges.size(), 0.0);
  {
    std::vector<std::size_t> du(graph.num_users, 0), di(graph.num_items, 0);
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
      if (mask && !(*mask)[k]) continue;
      ++du[graph.edges[k].first];
      ++di[graph.edges[k].second];
    }
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
      if (mask && !(*mask)[k]) continue;
      coeff[k] = 1.0 / std::sqrt(static_cast<double>(du[graph.edges[k].first]) *
                                 static_cast<double>(di[graph.edges[k].second]));
    }
  }

  PropagationOutput out;
  out.layers = layers;
  out.user_layers.reserve(layers + 1);
  out.item_layers.reserve(layers + 1);
  out.user_layers.push_back(user0);
  out.item_layers.push_back(item0);
  for (std::size_t l = 0; l < layers; ++l) {
    const Mat& u_prev = out.user_layers.back();
    const Mat& i_prev = out.item_layers.back();
    Mat u_next(graph.num_users, d);
    Mat i_next(graph.num_items, d);
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
      if (coeff[k] == 0.0) continue;
      const Edge& e = graph.edges[k];
      axpy(coeff[k], i_prev.row(e.second), u_next.row(e.first), d);
      axpy(coeff[k], u_prev.row(e.first), i_next.row(e.second), d);
    }
    out.user_layers.push_back(std::move(u_next));
    out.item_layers.push_back(std::move(i_next));
  }

  const double inv = 1.0 / static_cast<double>(layers + 1);
  out.user_final = Mat(graph.num_users, d);
  out.item_final = Mat(graph.num_items, d);
  for (std::size_t l = 0; l <= layers; ++l) {
    for (std::size_t k = 0; k < out.user_final.data.size(); ++k)
      out.user_final.data[k] += out.user_layers[l].data[k];
    for (std::size_t k = 0; k < out.item_final.data.size(); ++k)
      out.item_final.data[k] += out.item_layers[l].data[k];
  }
  scale(inv, out.user_final.data.data(), out.user_final.data.size());
  scale(inv, out.item_final.data.data(), out.item_final.data.size());
  return out;
}

// The propagation operator is symmetric over the joint user+item node set,
// so its adjoint is itself: gradients on the final embeddings pull back to
// layer 0 by running the same propagation on the gradients.
inline void propagate_backward(const Mat& grad_user_final, const Mat& grad_item_final,
                               const InteractionGraph& graph, const EdgeMask* mask,
                               std::size_t layers, Mat& grad_user0, Mat& grad_item0) {
  PropagationOutput back = propagate(grad_user_final, grad_item_final, graph, mask, layers);
  grad_user0 = std::move(back.user_final);
  grad_item0 = std::move(back.item_final);
}

inline double score(const PropagationOutput& out, std::uint32_t user,
                    std::uint32_t item) {
  if (user >= out.user_final.rows) throw std::out_of_range("user id out of range");
  if (item >= out.item_final.rows) throw std::out_of_range("item id out of range");
  return dot(out.user_final.row(user), out.item_final.row(item), out.user_final.cols);
}

// All-ranking: every item scored, the exclusion list removed, descending
// score with ties broken by ascending item id.
inline std::vector<std::uint32_t> score_all(const PropagationOutput& out,
                                            std::uint32_t user,
                                            const std::uint32_t* exclude_begin,
                                            const std::uint32_t* exclude_end) {
  if (user >= out.user_final.rows) throw std::out_of_range("user id out of range");
  const std::size_t n_items = out.item_final.rows;
  const std::size_t d = out.user_final.cols;
  const double* fu = out.user_final.row(user);
  std::vector<double> s(n_items);
  for (std::size_t i = 0; i < n_items; ++i) s[i] = dot(fu, out.item_final.row(i), d);
  std::vector<std::uint32_t> ids;
  ids.reserve(n_items);
  for (std::uint32_t i = 0; i < n_items; ++i)
    if (!std::binary_search(exclude_begin, exclude_end, i)) ids.push_back(i);
  std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
    return s[a] != s[b] ? s[a] > s[b] : a < b;
  });
  return ids;
}

inline std::vector<std::uint32_t> score_all(const PropagationOutput& out,
                                            std::uint32_t user,
                                            const InteractionGraph& train) {
  return score_all(out, user, train.user_items_begin(user), train.user_items_end(user));
}

}  // namespace kgcl
