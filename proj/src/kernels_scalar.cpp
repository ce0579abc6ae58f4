#include <cmath>

#include "dissim/kernels.hpp"

namespace dissim::kern::scalar {

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m) {
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += w[j] * v[idx[j]];
  return acc;
}

double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m) {
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::int32_t i = idx[j];
    acc += w[j] * std::fabs(a[i] - b[i]);
  }
  return acc;
}

}  // namespace dissim::kern::scalar
