#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgcl/matrix.hpp"
#include "kgcl/rng.hpp"

namespace kgcl {

struct Dims {
  std::size_t num_users = 0;
  std::size_t num_entities = 0;  // rows 0..num_items-1 are item embeddings
  std::size_t num_relations = 0;
  std::size_t dim = 0;
};

enum class Tensor { UserEmb, EntityEmb, RelationEmb, AttnW };

inline const char* tensor_name(Tensor t) {
  switch (t) {
    case Tensor::UserEmb: return "user_emb";
    case Tensor::EntityEmb: return "entity_emb";
    case Tensor::RelationEmb: return "relation_emb";
    case Tensor::AttnW: return "attn_w";
  }
  return "?";
}

// All trainable tensors plus same-shaped gradient accumulators. Shapes are
// fixed at construction; grads are zeroed between optimizer steps by the
// caller.
struct ParamStore {
  Dims dims;
  Mat user_emb;      // num_users x d
  Mat entity_emb;    // num_entities x d
  Mat relation_emb;  // num_relations x d
  Mat attn_w;        // d x 2d

  Mat g_user;
  Mat g_entity;
  Mat g_relation;
  Mat g_attn_w;

  Mat& param(Tensor t) {
    switch (t) {
      case Tensor::UserEmb: return user_emb;
      case Tensor::EntityEmb: return entity_emb;
      case Tensor::RelationEmb: return relation_emb;
      case Tensor::AttnW: return attn_w;
    }
    throw std::logic_error("bad tensor");
  }
  const Mat& param(Tensor t) const { return const_cast<ParamStore*>(this)->param(t); }
  Mat& grad(Tensor t) {
    switch (t) {
      case Tensor::UserEmb: return g_user;
      case Tensor::EntityEmb: return g_entity;
      case Tensor::RelationEmb: return g_relation;
      case Tensor::AttnW: return g_attn_w;
    }
    throw std::logic_error("bad tensor");
  }

  void zero_grads() {
    g_user.zero();
    g_entity.zero();
    g_relation.zero();
    g_attn_w.zero();
  }
};

inline constexpr std::array<Tensor, 4> kAllTensors = {
    Tensor::UserEmb, Tensor::EntityEmb, Tensor::RelationEmb, Tensor::AttnW};

// Glorot-style uniform init: each tensor drawn in [-a, a] with
// a = sqrt(6 / (rows + cols)).
inline ParamStore init_params(const Dims& dims, std::uint64_t seed) {
  if (dims.num_users == 0 || dims.num_entities == 0 || dims.dim == 0)
    throw std::invalid_argument("init_params: zero-size vocabulary");
  ParamStore s;
  s.dims = dims;
  s.user_emb = Mat(dims.num_users, dims.dim);
  s.entity_emb = Mat(dims.num_entities, dims.dim);
  s.relation_emb = Mat(std::max<std::size_t>(dims.num_relations, 1), dims.dim);
  s.attn_w = Mat(dims.dim, 2 * dims.dim);
  Rng rng = make_rng(derive_seed(seed, "init"));
  for (Tensor t : kAllTensors) {
    Mat& m = s.param(t);
    double a = std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
    for (double& v : m.data) v = rand_uniform(rng, -a, a);
  }
  s.g_user = Mat(s.user_emb.rows, s.user_emb.cols);
  s.g_entity = Mat(s.entity_emb.rows, s.entity_emb.cols);
  s.g_relation = Mat(s.relation_emb.rows, s.relation_emb.cols);
  s.g_attn_w = Mat(s.attn_w.rows, s.attn_w.cols);
  return s;
}

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::size_t step = 0;
  Mat m_user, v_user, m_entity, v_entity, m_relation, v_relation, m_attn_w, v_attn_w;

  AdamState() = default;
  AdamState(const ParamStore& s, const AdamConfig& c) : cfg(c) {
    m_user = Mat(s.user_emb.rows, s.user_emb.cols);
    v_user = Mat(s.user_emb.rows, s.user_emb.cols);
    m_entity = Mat(s.entity_emb.rows, s.entity_emb.cols);
    v_entity = Mat(s.entity_emb.rows, s.entity_emb.cols);
    m_relation = Mat(s.relation_emb.rows, s.relation_emb.cols);
    v_relation = Mat(s.relation_emb.rows, s.relation_emb.cols);
    m_attn_w = Mat(s.attn_w.rows, s.attn_w.cols);
    v_attn_w = Mat(s.attn_w.rows, s.attn_w.cols);
  }

  Mat& m(Tensor t) {
    switch (t) {
      case Tensor::UserEmb: return m_user;
      case Tensor::EntityEmb: return m_entity;
      case Tensor::RelationEmb: return m_relation;
      case Tensor::AttnW: return m_attn_w;
    }
    throw std::logic_error("bad tensor");
  }
  Mat& v(Tensor t) {
    switch (t) {
      case Tensor::UserEmb: return v_user;
      case Tensor::EntityEmb: return v_entity;
      case Tensor::RelationEmb: return v_relation;
      case Tensor::AttnW: return v_attn_w;
    }
    throw std::logic_error("bad tensor");
  }
  const Mat& m(Tensor t) const { return const_cast<AdamState*>(this)->m(t); }
  const Mat& v(Tensor t) const { return const_cast<AdamState*>(this)->v(t); }
};

// Standard bias-corrected Adam over every tensor. Grads are left untouched;
// the caller zeroes them. Throws on non-finite gradients, naming the tensor.
inline void adam_step(ParamStore& store, AdamState& state) {
  state.step += 1;
  const double b1 = state.cfg.beta1, b2 = state.cfg.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (Tensor t : kAllTensors) {
    Mat& p = store.param(t);
    Mat& g = store.grad(t);
    Mat& m = state.m(t);
    Mat& v = state.v(t);
    for (std::size_t k = 0; k < p.data.size(); ++k) {
      double gk = g.data[k];
      if (!std::isfinite(gk))
        throw std::runtime_error(std::string("non-finite gradient in ") + tensor_name(t));
      m.data[k] = b1 * m.data[k] + (1.0 - b1) * gk;
      v.data[k] = b2 * v.data[k] + (1.0 - b2) * gk * gk;
      double mh = m.data[k] / corr1;
      double vh = v.data[k] / corr2;
      p.data[k] -= state.cfg.lr * mh / (std::sqrt(vh) + state.cfg.eps);
    }
  }
}

// ---------------------------------------------------------------------------
// Checkpoint text format. %.17g round-trips doubles exactly, so a loaded
// checkpoint re-serializes byte-for-byte.

namespace detail {

inline void write_mat(std::ostream& out, const char* name, const Mat& m) {
  out << "tensor " << name << ' ' << m.rows << ' ' << m.cols << '\n';
  char buf[40];
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* r = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", r[j]);
      out << buf << (j + 1 == m.cols ? '\n' : ' ');
    }
  }
}

inline Mat read_mat(std::istream& in, const std::string& expect_name) {
  std::string kw, name;
  std::size_t rows = 0, cols = 0;
  if (!(in >> kw >> name >> rows >> cols) || kw != "tensor" || name != expect_name)
    throw std::runtime_error("checkpoint parse error: expected tensor " + expect_name);
  Mat m(rows, cols);
  for (double& v : m.data)
    if (!(in >> v)) throw std::runtime_error("checkpoint parse error in " + expect_name);
  return m;
}

}  // namespace detail

struct Checkpoint {
  ParamStore store;
  AdamState adam;
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
};

inline void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  std::ostringstream out;
  out << "kgcl-checkpoint v1\n";
  out << "seed " << ck.seed << " epoch " << ck.epoch << '\n';
  const Dims& d = ck.store.dims;
  out << "dims " << d.num_users << ' ' << d.num_entities << ' ' << d.num_relations
      << ' ' << d.dim << '\n';
  char buf[40];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "adam step " << ck.adam.step << " lr " << fmt(ck.adam.cfg.lr) << " beta1 "
      << fmt(ck.adam.cfg.beta1) << " beta2 " << fmt(ck.adam.cfg.beta2) << " eps "
      << fmt(ck.adam.cfg.eps) << '\n';
  for (Tensor t : kAllTensors) detail::write_mat(out, tensor_name(t), ck.store.param(t));
  for (Tensor t : kAllTensors)
    detail::write_mat(out, (std::string("adam_m_") + tensor_name(t)).c_str(), ck.adam.m(t));
  for (Tensor t : kAllTensors)
    detail::write_mat(out, (std::string("adam_v_") + tensor_name(t)).c_str(), ck.adam.v(t));

  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
    f << out.str();
    if (!f) throw std::runtime_error("checkpoint write failed: " + path);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot finalize checkpoint: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "kgcl-checkpoint" || version != "v1")
    throw std::runtime_error("not a kgcl checkpoint: " + path);
  Checkpoint ck;
  std::string kw;
  if (!(in >> kw >> ck.seed) || kw != "seed")
    throw std::runtime_error("checkpoint parse error: seed");
  if (!(in >> kw >> ck.epoch) || kw != "epoch")
    throw std::runtime_error("checkpoint parse error: epoch");
  Dims d;
  if (!(in >> kw >> d.num_users >> d.num_entities >> d.num_relations >> d.dim) ||
      kw != "dims")
    throw std::runtime_error("checkpoint parse error: dims");
  AdamConfig ac;
  std::size_t step = 0;
  std::string k1, k2, k3, k4, k5, k6;
  if (!(in >> k1 >> k2 >> step >> k3 >> ac.lr >> k4 >> ac.beta1 >> k5 >> ac.beta2 >>
        k6 >> ac.eps) ||
      k1 != "adam")
    throw std::runtime_error("checkpoint parse error: adam");

  ParamStore s;
  s.dims = d;
  s.user_emb = detail::read_mat(in, "user_emb");
  s.entity_emb = detail::read_mat(in, "entity_emb");
  s.relation_emb = detail::read_mat(in, "relation_emb");
  s.attn_w = detail::read_mat(in, "attn_w");
  s.g_user = Mat(s.user_emb.rows, s.user_emb.cols);
  s.g_entity = Mat(s.entity_emb.rows, s.entity_emb.cols);
  s.g_relation = Mat(s.relation_emb.rows, s.relation_emb.cols);
  s.g_attn_w = Mat(s.attn_w.rows, s.attn_w.cols);

  AdamState a(s, ac);
  a.step = step;
  for (Tensor t : kAllTensors)
    a.m(t) = detail::read_mat(in, std::string("adam_m_") + tensor_name(t));
  for (Tensor t : kAllTensors)
    a.v(t) = detail::read_mat(in, std::string("adam_v_") + tensor_name(t));

  ck.store = std::move(s);
  ck.adam = std::move(a);
  return ck;
}

}  // namespace kgcl
