#include <cstdlib>
#include <cstring>

#include "evgrip/kernels.hpp"

namespace evgrip::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

#if !(defined(__x86_64__) || defined(_M_X64))
const Backend& avx2_backend() { return scalar_backend(); }
#endif

const Backend& active_backend() {
  static const Backend* chosen = [] {
    const char* env = std::getenv("EVGRIP_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (avx2_available()) return &avx2_backend();
    return &scalar_backend();
  }();
  return *chosen;
}

PolarityCounts count_polarities(const PolarityEvent* ev, std::size_t n) {
  return active_backend().count_polarities(ev, n);
}

std::uint64_t count_pos_in_mask(const PolarityEvent* ev, std::size_t n,
                                const PixelTable& support) {
  return active_backend().count_pos_in_mask(ev, n, support);
}

void mark_keep(const PolarityEvent* ev, std::size_t n, const PixelTable& drop,
               std::uint8_t* keep) {
  active_backend().mark_keep(ev, n, drop, keep);
}

void level_cross_counts(const float* cur, const float* ref, float contrast,
                        std::int32_t* out, std::size_t n) {
  active_backend().level_cross_counts(cur, ref, contrast, out, n);
}

}  // namespace evgrip::kernels
