#include <cstdlib>
#include <string_view>

#include "divref/simd/kernels.hpp"

namespace divref::simd {

const KernelTable* avx2_kernels_unchecked() noexcept;

const KernelTable* avx2_kernels() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  if (const char* forced = std::getenv("DIVREF_SIMD"); forced != nullptr && std::string_view(forced) == "scalar") {
    return scalar_kernels();
  }
  if (const auto* t = avx2_kernels()) return *t;
  if (const auto* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace divref::simd
