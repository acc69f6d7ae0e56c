#pragma once

// Data-parallel inner loops shared by the metric and diversity code.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2 on x86-64, NEON on AArch64) are selected once at startup based on the
// running CPU. Integer kernels are bit-exact across variants. Floating-point
// reductions differ from the scalar order by rounding only.
//
// Set DIVREF_SIMD=scalar in the environment to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace divref::simd {

struct KernelTable {
  std::string_view name;
  // sum_i min(a[i], b[i])
  std::uint64_t (*sum_min_u32)(const std::uint32_t* a, const std::uint32_t* b, std::size_t n);
  // dst[i] = max(dst[i], src[i])
  void (*max_inplace_u32)(std::uint32_t* dst, const std::uint32_t* src, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  // sum_i min(a[i], b[i]) * b[i]
  double (*clipped_dot_f64)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

// The table chosen for this process.
const KernelTable& active_kernels() noexcept;

inline std::uint64_t sum_min(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) noexcept {
  return active_kernels().sum_min_u32(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void max_inplace(std::span<std::uint32_t> dst, std::span<const std::uint32_t> src) noexcept {
  active_kernels().max_inplace_u32(dst.data(), src.data(), dst.size() < src.size() ? dst.size() : src.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active_kernels().dot_f64(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double clipped_dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active_kernels().clipped_dot_f64(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

}  // namespace divref::simd
