#pragma once

#include <cstddef>
#include <cstdint>

// Dense inner loops shared by the whole pipeline: dissimilarity vectors,
// hinge-loss training updates, nearest-neighbour distances and masked
// scoring. Each kernel has a scalar reference implementation and an AVX2
// variant; the active variant is picked at runtime from CPU capabilities and
// can be forced (e.g. by the equivalence tests).

namespace dissim::kern {

enum class Backend { Scalar, Avx2 };

// Reference implementations, always compiled. The dispatcher falls back to
// these on CPUs without AVX2+FMA, and tests compare the active backend
// against this namespace.
namespace scalar {
void abs_diff(const double* a, const double* b, double* out, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m);
double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m);
}  // namespace scalar

bool cpu_has_avx2();
Backend active_backend();

// Forces a backend. Throws ConfigError when the requested backend is not
// available on this CPU/build. Intended for tests and benchmarking.
void set_backend(Backend backend);

// out[i] = |a[i] - b[i]|
void abs_diff(const double* a, const double* b, double* out, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

double squared_distance(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// sum_j w[j] * v[idx[j]]
double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m);

// sum_j w[j] * |a[idx[j]] - b[idx[j]]|
double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m);

}  // namespace dissim::kern
