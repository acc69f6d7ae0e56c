#include "divref/simd/kernels.hpp"

namespace divref::simd {
namespace {

std::uint64_t sum_min_u32_scalar(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] < b[i] ? a[i] : b[i];
  return total;
}

void max_inplace_u32_scalar(std::uint32_t* dst, const std::uint32_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (src[i] > dst[i]) dst[i] = src[i];
  }
}

double dot_f64_scalar(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += a[i] * b[i];
  return total;
}

double clipped_dot_f64_scalar(const double* a, const double* b, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += (a[i] < b[i] ? a[i] : b[i]) * b[i];
  return total;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", &sum_min_u32_scalar, &max_inplace_u32_scalar,
                                 &dot_f64_scalar, &clipped_dot_f64_scalar};
  return table;
}

}  // namespace divref::simd
