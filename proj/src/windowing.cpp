#include "evgrip/windowing.hpp"

#include <algorithm>

#include "evgrip/errors.hpp"

namespace evgrip {

std::vector<EventWindow> window_stream(std::span<const PolarityEvent> events,
                                       std::int64_t window_us,
                                       std::int64_t min_duration_us) {
  if (window_us <= 0) fail(Err::ZeroWindow, "window_us must be positive");

  std::int64_t prev_t = 0;
  for (const auto& e : events) {
    if (e.t_us < prev_t) fail(Err::UnsortedEvents, "timestamps not sorted");
    prev_t = e.t_us;
  }

  std::int64_t span_us = min_duration_us;
  if (!events.empty()) span_us = std::max(span_us, events.back().t_us + 1);
  const std::size_t n_windows =
      static_cast<std::size_t>((span_us + window_us - 1) / window_us);

  std::vector<EventWindow> windows(n_windows);
  for (std::size_t k = 0; k < n_windows; ++k) {
    windows[k].t_start_us = static_cast<std::int64_t>(k) * window_us;
    windows[k].t_end_us = windows[k].t_start_us + window_us;
  }

  std::size_t k = 0;
  for (const auto& e : events) {
    while (e.t_us >= windows[k].t_end_us) ++k;
    windows[k].events.push_back(e);
  }
  for (auto& w : windows)
    std::sort(w.events.begin(), w.events.end(), event_before);
  return windows;
}

}  // namespace evgrip
