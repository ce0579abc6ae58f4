#pragma once

#include <cstddef>
#include <cstdint>

// Internal: per-backend function tables for the dispatcher.

namespace dissim::kern {

struct KernelTable {
  void (*abs_diff)(const double*, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot_indexed)(const double*, const double*, const std::int32_t*, std::size_t);
  double (*abs_diff_dot_indexed)(const double*, const double*, const double*, const std::int32_t*,
                                 std::size_t);
};

#if DISSIM_HAVE_AVX2_TU
namespace avx2 {
void abs_diff(const double* a, const double* b, double* out, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m);
double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m);
}  // namespace avx2
#endif

}  // namespace dissim::kern
