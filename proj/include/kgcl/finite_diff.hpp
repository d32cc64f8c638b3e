#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kgcl/params.hpp"

namespace kgcl {

struct ParamCoord {
  Tensor tensor = Tensor::UserEmb;
  std::size_t index = 0;  // flat index into the tensor
};

// Every trainable coordinate of the store, flattened, for sampling.
inline std::vector<ParamCoord> all_coords(const ParamStore& store) {
  std::vector<ParamCoord> out;
  for (Tensor t : kAllTensors) {
    const Mat& m = store.param(t);
    for (std::size_t k = 0; k < m.data.size(); ++k) out.push_back({t, k});
  }
  return out;
}

// Central-difference check of a loss function against its own accumulated
// gradients. loss_fn must be deterministic (any sampling frozen by the
// caller) and must accumulate d(loss)/d(params) into store grads. Returns
// the max relative error over the sampled coordinates with denominator
// max(|analytic|, |numeric|, 1e-8).
inline double finite_diff_check(const std::function<double(ParamStore&)>& loss_fn,
                                ParamStore& store,
                                const std::vector<ParamCoord>& coords, double h) {
  if (h <= 0.0) throw std::invalid_argument("finite difference step must be > 0");
  store.zero_grads();
  double base = loss_fn(store);
  std::vector<double> analytic(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    analytic[i] = store.grad(coords[i].tensor).data[coords[i].index];
  store.zero_grads();
  double replay = loss_fn(store);
  if (replay != base)
    throw std::runtime_error("loss function is not deterministic across probes");

  double max_rel = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    double& theta = store.param(coords[i].tensor).data[coords[i].index];
    const double saved = theta;
    theta = saved + h;
    store.zero_grads();
    double up = loss_fn(store);
    theta = saved - h;
    store.zero_grads();
    double down = loss_fn(store);
    theta = saved;
    double numeric = (up - down) / (2.0 * h);
    double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::fabs(analytic[i] - numeric) / denom);
  }
  store.zero_grads();
  return max_rel;
}

}  // namespace kgcl
