#include "dissim/kernels.hpp"

#include <atomic>

#include "dissim/errors.hpp"
#include "kernels_backend.hpp"

namespace dissim::kern {

namespace {

constexpr KernelTable kScalarTable = {
    &scalar::abs_diff,    &scalar::dot,         &scalar::squared_distance,
    &scalar::axpy,        &scalar::dot_indexed, &scalar::abs_diff_dot_indexed,
};

#if DISSIM_HAVE_AVX2_TU
constexpr KernelTable kAvx2Table = {
    &avx2::abs_diff,    &avx2::dot,         &avx2::squared_distance,
    &avx2::axpy,        &avx2::dot_indexed, &avx2::abs_diff_dot_indexed,
};
#endif

struct Dispatch {
  std::atomic<const KernelTable*> table;
  std::atomic<Backend> backend;

  Dispatch() {
#if DISSIM_HAVE_AVX2_TU
    if (cpu_has_avx2()) {
      table.store(&kAvx2Table, std::memory_order_relaxed);
      backend.store(Backend::Avx2, std::memory_order_relaxed);
      return;
    }
#endif
    table.store(&kScalarTable, std::memory_order_relaxed);
    backend.store(Backend::Scalar, std::memory_order_relaxed);
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

const KernelTable& table() { return *dispatch().table.load(std::memory_order_relaxed); }

}  // namespace

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return dispatch().backend.load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (backend == Backend::Scalar) {
    dispatch().table.store(&kScalarTable, std::memory_order_relaxed);
    dispatch().backend.store(Backend::Scalar, std::memory_order_relaxed);
    return;
  }
#if DISSIM_HAVE_AVX2_TU
  if (cpu_has_avx2()) {
    dispatch().table.store(&kAvx2Table, std::memory_order_relaxed);
    dispatch().backend.store(Backend::Avx2, std::memory_order_relaxed);
    return;
  }
#endif
  throw ConfigError("AVX2 backend requested but not available on this CPU/build");
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  table().abs_diff(a, b, out, n);
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }

double squared_distance(const double* a, const double* b, std::size_t n) {
  return table().squared_distance(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table().axpy(alpha, x, y, n);
}

double dot_indexed(const double* w, const double* v, const std::int32_t* idx, std::size_t m) {
  return table().dot_indexed(w, v, idx, m);
}

double abs_diff_dot_indexed(const double* w, const double* a, const double* b,
                            const std::int32_t* idx, std::size_t m) {
  return table().abs_diff_dot_indexed(w, a, b, idx, m);
}

}  // namespace dissim::kern
