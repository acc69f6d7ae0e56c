#include "divref/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace divref::simd {
namespace {

std::uint64_t sum_min_u32_neon(const std::uint32_t* a, const std::uint32_t* b, std::size_t n) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const uint32x4_t m = vminq_u32(vld1q_u32(a + i), vld1q_u32(b + i));
    acc = vpadalq_u32(acc, m);
  }
  std::uint64_t total = vaddvq_u64(acc);
  for (; i < n; ++i) total += a[i] < b[i] ? a[i] : b[i];
  return total;
}

void max_inplace_u32_neon(std::uint32_t* dst, const std::uint32_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_u32(dst + i, vmaxq_u32(vld1q_u32(dst + i), vld1q_u32(src + i)));
  for (; i < n; ++i) {
    if (src[i] > dst[i]) dst[i] = src[i];
  }
}

double dot_f64_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double total = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double clipped_dot_f64_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vb = vld1q_f64(b + i);
    acc = vfmaq_f64(acc, vminq_f64(vld1q_f64(a + i), vb), vb);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += (a[i] < b[i] ? a[i] : b[i]) * b[i];
  return total;
}

}  // namespace

const KernelTable* neon_kernels() noexcept {
  static const KernelTable table{"neon", &sum_min_u32_neon, &max_inplace_u32_neon, &dot_f64_neon,
                                 &clipped_dot_f64_neon};
  return &table;
}

}  // namespace divref::simd

#else

namespace divref::simd {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace divref::simd

#endif
