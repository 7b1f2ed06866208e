#pragma once

#include <filesystem>
#include <vector>

#include "evgrip/events.hpp"
#include "evgrip/kernels.hpp"

namespace evgrip {

// Per-pixel negative-event tallies gathered while the gripper closes.
struct ContactAccumulator {
  explicit ContactAccumulator(SensorGeometry g)
      : geometry(g), neg_counts(g.pixel_count(), 0) {}

  SensorGeometry geometry;
  std::vector<std::uint32_t> neg_counts;
  std::uint64_t total_neg = 0;

  std::uint32_t at(std::uint16_t x, std::uint16_t y) const {
    return neg_counts[static_cast<std::size_t>(y) * geometry.width + x];
  }
};

// Normalized contact-area weights: 1/area on the support, 0 elsewhere.
// Immutable once finalized.
struct ContactMask {
  SensorGeometry geometry;
  kernels::PixelTable support;
  std::uint32_t area_px = 0;
  double weight_value = 0.0;  // 1.0 / area_px

  double weight_sum() const { return weight_value * area_px; }
};

// Adds the window's NEG events to the tallies; POS events are ignored.
void accumulate(ContactAccumulator& acc, const EventWindow& window);

// Support = pixels with at least min_events NEG events. Throws NoContact
// when the support is empty.
ContactMask finalize_mask(const ContactAccumulator& acc,
                          std::uint32_t min_events);

double mask_weight(const ContactMask& mask, std::uint16_t x, std::uint16_t y);

// CSV of x,y,weight rows over the support. hold_start_ms, when >= 0, is
// recorded in a leading comment so offline replay can activate the mask at
// the same tick as the live run.
void save_mask_csv(const std::filesystem::path& path, const ContactMask& mask,
                   std::int64_t hold_start_ms = -1);
struct LoadedMask {
  ContactMask mask;
  std::int64_t hold_start_ms = -1;
};
LoadedMask load_mask_csv(const std::filesystem::path& path,
                         SensorGeometry geometry);

// P2 ASCII image of the support, for eyeballing the grasp footprint.
void save_mask_pgm(const std::filesystem::path& path, const ContactMask& mask);

}  // namespace evgrip
