#pragma once

#include <cstdint>
#include <cstddef>
#include <tuple>
#include <vector>

namespace evgrip {

enum class Polarity : std::uint8_t { NEG = 0, POS = 1 };

struct SensorGeometry {
  std::uint16_t width = 240;
  std::uint16_t height = 180;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }
  bool contains(std::uint16_t x, std::uint16_t y) const {
    return x < width && y < height;
  }
  bool operator==(const SensorGeometry&) const = default;
};

// One asynchronous brightness-change event. The layout matches an EVS1
// record (16 bytes, little-endian fields on all supported targets) so
// event arrays can be scanned by the SIMD kernels with fixed offsets.
struct PolarityEvent {
  std::int64_t t_us = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity polarity = Polarity::NEG;
  std::uint8_t pad[3] = {0, 0, 0};

  bool operator==(const PolarityEvent& o) const {
    return t_us == o.t_us && x == o.x && y == o.y && polarity == o.polarity;
  }
};

static_assert(sizeof(PolarityEvent) == 16, "EVS1 record layout");
static_assert(offsetof(PolarityEvent, x) == 8);
static_assert(offsetof(PolarityEvent, y) == 10);
static_assert(offsetof(PolarityEvent, polarity) == 12);

// Stream order: by timestamp, ties broken by (y, x, polarity).
inline bool event_before(const PolarityEvent& a, const PolarityEvent& b) {
  return std::tie(a.t_us, a.y, a.x, a.polarity) <
         std::tie(b.t_us, b.y, b.x, b.polarity);
}

inline bool events_time_sorted(const std::vector<PolarityEvent>& events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].t_us < events[i - 1].t_us) return false;
  }
  return true;
}

struct EventWindow {
  std::int64_t t_start_us = 0;
  std::int64_t t_end_us = 0;
  std::vector<PolarityEvent> events;

  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
};

}  // namespace evgrip
