#include "evgrip/noise_filter.hpp"

#include <algorithm>
#include <fstream>

#include "evgrip/errors.hpp"

namespace evgrip {

HotPixelSet::HotPixelSet(
    SensorGeometry geometry,
    std::vector<std::pair<std::uint16_t, std::uint16_t>> pixels)
    : geometry_(geometry),
      pixels_(std::move(pixels)),
      table_(geometry.width, geometry.height) {
  std::sort(pixels_.begin(), pixels_.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.second, a.first) < std::tie(b.second, b.first);
            });
  pixels_.erase(std::unique(pixels_.begin(), pixels_.end()), pixels_.end());
  for (const auto& [x, y] : pixels_) {
    if (!geometry_.contains(x, y))
      fail(Err::CoordinateOutOfRange, "hot pixel outside sensor");
    table_.set(x, y, true);
  }
}

HotPixelSet learn_hot_pixels(std::span<const PolarityEvent> events,
                             const HotPixelParams& params,
                             const SensorGeometry& geometry) {
  if (geometry.width == 0 || geometry.height == 0)
    fail(Err::EmptyGeometry, "cannot learn on empty sensor");
  if (params.learn_period_us <= 0)
    fail(Err::ZeroWindow, "learn period must be positive");

  std::vector<std::uint32_t> counts(geometry.pixel_count(), 0);
  for (const auto& e : events) {
    if (e.t_us >= params.learn_period_us) break;  // stream is time sorted
    if (!geometry.contains(e.x, e.y))
      fail(Err::CoordinateOutOfRange, "event outside sensor");
    ++counts[static_cast<std::size_t>(e.y) * geometry.width + e.x];
  }

  std::vector<std::pair<std::uint16_t, std::uint16_t>> hot;
  for (std::uint16_t y = 0; y < geometry.height; ++y) {
    for (std::uint16_t x = 0; x < geometry.width; ++x) {
      if (counts[static_cast<std::size_t>(y) * geometry.width + x] >=
          params.hot_threshold)
        hot.emplace_back(x, y);
    }
  }
  return HotPixelSet(geometry, std::move(hot));
}

EventWindow apply_filter(const EventWindow& window, const HotPixelSet& hot) {
  EventWindow out;
  out.t_start_us = window.t_start_us;
  out.t_end_us = window.t_end_us;
  if (window.events.empty()) return out;

  std::vector<std::uint8_t> keep(window.events.size());
  kernels::mark_keep(window.events.data(), window.events.size(), hot.table(),
                     keep.data());
  out.events.reserve(window.events.size());
  for (std::size_t i = 0; i < window.events.size(); ++i)
    if (keep[i]) out.events.push_back(window.events[i]);
  return out;
}

kernels::PolarityCounts count_polarities(const EventWindow& window) {
  return kernels::count_polarities(window.events.data(), window.events.size());
}

void save_hot_pixels(const std::filesystem::path& path, const HotPixelSet& s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + path.string());
  out << s.geometry().width << ' ' << s.geometry().height << '\n';
  for (const auto& [x, y] : s.pixels()) out << x << ' ' << y << '\n';
  if (!out) fail(Err::IoFailure, "write failed: " + path.string());
}

HotPixelSet load_hot_pixels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoFailure, "cannot open " + path.string());
  SensorGeometry geom;
  if (!(in >> geom.width >> geom.height))
    fail(Err::IoFailure, "bad hot pixel header in " + path.string());
  std::vector<std::pair<std::uint16_t, std::uint16_t>> pixels;
  std::uint16_t x, y;
  while (in >> x >> y) pixels.emplace_back(x, y);
  return HotPixelSet(geom, std::move(pixels));
}

}  // namespace evgrip
