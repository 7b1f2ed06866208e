// AVX2 variants of the detector kernels. Events are 16-byte records, i.e.
// four i32 lanes each: [t_lo, t_hi, x|y<<16, polarity|pad<<8]. Lane 2 and
// lane 3 of every record are pulled with stride-4 gathers, so eight events
// are processed per iteration without any layout conversion.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "evgrip/kernels.hpp"

namespace evgrip::kernels {
namespace avx2 {

namespace {

const __m256i kLaneXY = _mm256_setr_epi32(2, 6, 10, 14, 18, 22, 26, 30);
const __m256i kLanePol = _mm256_setr_epi32(3, 7, 11, 15, 19, 23, 27, 31);

inline std::uint64_t hsum_epi32(__m256i v) {
  alignas(32) std::int32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s += static_cast<std::uint32_t>(lanes[i]);
  return s;
}

}  // namespace

PolarityCounts count_polarities(const PolarityEvent* ev, std::size_t n) {
  const __m256i ones = _mm256_set1_epi32(1);
  const __m256i byte_mask = _mm256_set1_epi32(0xFF);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  // lane counters are i32: fine below ~2^31 positive hits per lane
  for (; i + 8 <= n; i += 8) {
    const int* p = reinterpret_cast<const int*>(ev + i);
    __m256i pol = _mm256_i32gather_epi32(p, kLanePol, 4);
    pol = _mm256_and_si256(pol, byte_mask);
    const __m256i is_pos = _mm256_cmpeq_epi32(pol, ones);
    acc = _mm256_sub_epi32(acc, is_pos);  // is_pos lanes are -1
  }
  PolarityCounts c;
  c.pos = hsum_epi32(acc);
  for (; i < n; ++i) c.pos += ev[i].polarity == Polarity::POS;
  c.neg = n - c.pos;
  return c;
}

std::uint64_t count_pos_in_mask(const PolarityEvent* ev, std::size_t n,
                                const PixelTable& support) {
  const std::uint8_t* tab = support.data();
  const int* tab32 = reinterpret_cast<const int*>(tab);
  const __m256i ones = _mm256_set1_epi32(1);
  const __m256i byte_mask = _mm256_set1_epi32(0xFF);
  const __m256i xmask = _mm256_set1_epi32(0xFFFF);
  const __m256i width = _mm256_set1_epi32(support.width());
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const int* p = reinterpret_cast<const int*>(ev + i);
    const __m256i xy = _mm256_i32gather_epi32(p, kLaneXY, 4);
    __m256i pol = _mm256_i32gather_epi32(p, kLanePol, 4);
    pol = _mm256_and_si256(pol, byte_mask);
    const __m256i x = _mm256_and_si256(xy, xmask);
    const __m256i y = _mm256_srli_epi32(xy, 16);
    const __m256i lin = _mm256_add_epi32(_mm256_mullo_epi32(y, width), x);
    // byte-granular gather; table is tail-padded so the word read is safe
    __m256i t = _mm256_i32gather_epi32(tab32, lin, 1);
    t = _mm256_and_si256(t, byte_mask);
    const __m256i hit = _mm256_and_si256(_mm256_cmpeq_epi32(t, ones),
                                         _mm256_cmpeq_epi32(pol, ones));
    acc = _mm256_sub_epi32(acc, hit);
  }
  std::uint64_t count = hsum_epi32(acc);
  const std::size_t w = support.width();
  for (; i < n; ++i) {
    const std::size_t lin = static_cast<std::size_t>(ev[i].y) * w + ev[i].x;
    count += (ev[i].polarity == Polarity::POS) & (tab[lin] != 0);
  }
  return count;
}

void mark_keep(const PolarityEvent* ev, std::size_t n, const PixelTable& drop,
               std::uint8_t* keep) {
  const std::uint8_t* tab = drop.data();
  const int* tab32 = reinterpret_cast<const int*>(tab);
  const __m256i byte_mask = _mm256_set1_epi32(0xFF);
  const __m256i xmask = _mm256_set1_epi32(0xFFFF);
  const __m256i width = _mm256_set1_epi32(drop.width());
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const int* p = reinterpret_cast<const int*>(ev + i);
    const __m256i xy = _mm256_i32gather_epi32(p, kLaneXY, 4);
    const __m256i x = _mm256_and_si256(xy, xmask);
    const __m256i y = _mm256_srli_epi32(xy, 16);
    const __m256i lin = _mm256_add_epi32(_mm256_mullo_epi32(y, width), x);
    __m256i t = _mm256_i32gather_epi32(tab32, lin, 1);
    t = _mm256_and_si256(t, byte_mask);
    alignas(32) std::int32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), t);
    for (int j = 0; j < 8; ++j) keep[i + j] = lanes[j] ? 0 : 1;
  }
  const std::size_t w = drop.width();
  for (; i < n; ++i) {
    const std::size_t lin = static_cast<std::size_t>(ev[i].y) * w + ev[i].x;
    keep[i] = tab[lin] ? 0 : 1;
  }
}

void level_cross_counts(const float* cur, const float* ref, float contrast,
                        std::int32_t* out, std::size_t n) {
  const __m256 c = _mm256_set1_ps(contrast);
  const __m256 abs_mask =
      _mm256_castsi256_ps(_mm256_set1_epi32(0x7FFFFFFF));
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 a = _mm256_loadu_ps(cur + i);
    const __m256 b = _mm256_loadu_ps(ref + i);
    const __m256 d = _mm256_sub_ps(a, b);
    const __m256 m = _mm256_and_ps(d, abs_mask);
    // div is correctly rounded, cvtt truncates: identical to the scalar path
    const __m256i k = _mm256_cvttps_epi32(_mm256_div_ps(m, c));
    const __m256i isneg =
        _mm256_castps_si256(_mm256_cmp_ps(d, zero, _CMP_LT_OQ));
    const __m256i negk = _mm256_sub_epi32(_mm256_setzero_si256(), k);
    const __m256i r = _mm256_blendv_epi8(k, negk, isneg);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), r);
  }
  for (; i < n; ++i) {
    const float d = cur[i] - ref[i];
    const float m = d < 0.0f ? -d : d;
    const std::int32_t k = static_cast<std::int32_t>(m / contrast);
    out[i] = d < 0.0f ? -k : k;
  }
}

}  // namespace avx2

const Backend& avx2_backend() {
  static const Backend b{"avx2", avx2::count_polarities,
                         avx2::count_pos_in_mask, avx2::mark_keep,
                         avx2::level_cross_counts};
  return b;
}

}  // namespace evgrip::kernels

#endif  // x86_64
