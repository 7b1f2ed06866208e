#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evgrip/events.hpp"

// Data-parallel inner loops of the detector path. Each kernel exists as a
// scalar reference implementation and, on x86-64, an AVX2 variant; the two
// are equivalence-tested and the active backend is picked once at startup
// (EVGRIP_KERNELS=scalar|avx2 overrides). Integer results are exact and the
// float kernel uses only correctly-rounded ops, so variants agree bitwise.

namespace evgrip::kernels {

struct PolarityCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

// Per-pixel 0/1 byte table. Keeps an 8-byte tail pad so vector gathers may
// read a full word at the last pixel.
class PixelTable {
 public:
  PixelTable() = default;
  PixelTable(std::uint16_t width, std::uint16_t height)
      : w_(width), h_(height),
        bytes_(static_cast<std::size_t>(width) * height + 8, 0) {}

  void set(std::uint16_t x, std::uint16_t y, bool v) {
    bytes_[index(x, y)] = v ? 1 : 0;
  }
  bool test(std::uint16_t x, std::uint16_t y) const {
    return bytes_[index(x, y)] != 0;
  }

  const std::uint8_t* data() const { return bytes_.data(); }
  std::uint16_t width() const { return w_; }
  std::uint16_t height() const { return h_; }
  std::size_t count_set() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(w_) * h_; ++i)
      n += bytes_[i];
    return n;
  }

 private:
  std::size_t index(std::uint16_t x, std::uint16_t y) const {
    return static_cast<std::size_t>(y) * w_ + x;
  }

  std::uint16_t w_ = 0, h_ = 0;
  std::vector<std::uint8_t> bytes_;
};

using CountPolaritiesFn = PolarityCounts (*)(const PolarityEvent*, std::size_t);
using CountPosInMaskFn = std::uint64_t (*)(const PolarityEvent*, std::size_t,
                                           const PixelTable&);
using MarkKeepFn = void (*)(const PolarityEvent*, std::size_t,
                            const PixelTable& drop, std::uint8_t* keep);
// out[i] = sign(cur[i]-ref[i]) * floor(|cur[i]-ref[i]| / contrast)
using LevelCrossFn = void (*)(const float* cur, const float* ref,
                              float contrast, std::int32_t* out,
                              std::size_t n);

struct Backend {
  const char* name;
  CountPolaritiesFn count_polarities;
  CountPosInMaskFn count_pos_in_mask;
  MarkKeepFn mark_keep;
  LevelCrossFn level_cross_counts;
};

const Backend& scalar_backend();
bool avx2_available();               // compiled in and supported by this CPU
const Backend& avx2_backend();       // only valid when avx2_available()
const Backend& active_backend();

// Dispatching wrappers.
PolarityCounts count_polarities(const PolarityEvent* ev, std::size_t n);
std::uint64_t count_pos_in_mask(const PolarityEvent* ev, std::size_t n,
                                const PixelTable& support);
void mark_keep(const PolarityEvent* ev, std::size_t n, const PixelTable& drop,
               std::uint8_t* keep);
void level_cross_counts(const float* cur, const float* ref, float contrast,
                        std::int32_t* out, std::size_t n);

}  // namespace evgrip::kernels
