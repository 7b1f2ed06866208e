#include <cmath>

#include "evgrip/kernels.hpp"

namespace evgrip::kernels {
namespace scalar {

PolarityCounts count_polarities(const PolarityEvent* ev, std::size_t n) {
  PolarityCounts c;
  for (std::size_t i = 0; i < n; ++i) {
    if (ev[i].polarity == Polarity::POS)
      ++c.pos;
    else
      ++c.neg;
  }
  return c;
}

std::uint64_t count_pos_in_mask(const PolarityEvent* ev, std::size_t n,
                                const PixelTable& support) {
  const std::uint8_t* tab = support.data();
  const std::size_t w = support.width();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lin = static_cast<std::size_t>(ev[i].y) * w + ev[i].x;
    count += (ev[i].polarity == Polarity::POS) & (tab[lin] != 0);
  }
  return count;
}

void mark_keep(const PolarityEvent* ev, std::size_t n, const PixelTable& drop,
               std::uint8_t* keep) {
  const std::uint8_t* tab = drop.data();
  const std::size_t w = drop.width();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lin = static_cast<std::size_t>(ev[i].y) * w + ev[i].x;
    keep[i] = tab[lin] ? 0 : 1;
  }
}

void level_cross_counts(const float* cur, const float* ref, float contrast,
                        std::int32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float d = cur[i] - ref[i];
    const float m = std::fabs(d);
    // truncation == floor for m >= 0
    const std::int32_t k = static_cast<std::int32_t>(m / contrast);
    out[i] = d < 0.0f ? -k : k;
  }
}

}  // namespace scalar

const Backend& scalar_backend() {
  static const Backend b{"scalar", scalar::count_polarities,
                         scalar::count_pos_in_mask, scalar::mark_keep,
                         scalar::level_cross_counts};
  return b;
}

}  // namespace evgrip::kernels
