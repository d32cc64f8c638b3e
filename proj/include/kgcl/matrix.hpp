#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kgcl {

// Dense row-major matrix of doubles. All embedding tables and gradient
// accumulators in the project are Mats; shapes are fixed after construction.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline double dot(const double* x, const double* y, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += x[k] * y[k];
  return s;
}

// y += a * x
inline void axpy(double a, const double* x, double* y, std::size_t d) {
  for (std::size_t k = 0; k < d; ++k) y[k] += a * x[k];
}

inline void scale(double a, double* x, std::size_t d) {
  for (std::size_t k = 0; k < d; ++k) x[k] *= a;
}

inline double norm2(const double* x, std::size_t d) {
  return std::sqrt(dot(x, x, d));
}

inline double sq_norm(const double* x, std::size_t d) { return dot(x, x, d); }

// Cosine similarity with a tiny-denominator guard; callers that need an exact
// convention for zero vectors (consistency scores) handle that case first.
inline double cosine(const double* x, const double* y, std::size_t d) {
  double nx = norm2(x, d);
  double ny = norm2(y, d);
  double denom = nx * ny;
  if (denom < 1e-12) denom = 1e-12;
  double c = dot(x, y, d) / denom;
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace kgcl
