#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "evgrip/events.hpp"
#include "evgrip/kernels.hpp"

namespace evgrip {

struct HotPixelParams {
  std::int64_t learn_period_us = 100000;  // accumulate events this long
  std::uint32_t hot_threshold = 50;       // events in the period => hot
};

// Immutable after learning; safe to share between threads.
class HotPixelSet {
 public:
  HotPixelSet() = default;
  HotPixelSet(SensorGeometry geometry,
              std::vector<std::pair<std::uint16_t, std::uint16_t>> pixels);

  const SensorGeometry& geometry() const { return geometry_; }
  // sorted by (y, x)
  const std::vector<std::pair<std::uint16_t, std::uint16_t>>& pixels() const {
    return pixels_;
  }
  std::size_t size() const { return pixels_.size(); }
  bool contains(std::uint16_t x, std::uint16_t y) const {
    return table_.test(x, y);
  }
  const kernels::PixelTable& table() const { return table_; }

 private:
  SensorGeometry geometry_;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> pixels_;
  kernels::PixelTable table_;
};

// Counts events per pixel over [0, learn_period_us); both polarities count.
// A pixel is hot when its count reaches hot_threshold.
HotPixelSet learn_hot_pixels(std::span<const PolarityEvent> events,
                             const HotPixelParams& params,
                             const SensorGeometry& geometry);

// Drops events whose coordinates are in the hot set. Order and window
// bounds are preserved.
EventWindow apply_filter(const EventWindow& window, const HotPixelSet& hot);

kernels::PolarityCounts count_polarities(const EventWindow& window);

// Text format: "width height" line, then one "x y" line per pixel, (y, x)
// sorted.
void save_hot_pixels(const std::filesystem::path& path, const HotPixelSet& s);
HotPixelSet load_hot_pixels(const std::filesystem::path& path);

}  // namespace evgrip
