#pragma once

#include <span>
#include <vector>

#include "evgrip/events.hpp"

namespace evgrip {

// Slices a time-sorted stream into half-open windows [k*window_us,
// (k+1)*window_us). Every event lands in exactly one window; empty windows
// are emitted so downstream control ticks keep running. min_duration_us
// extends the covered range beyond the last event (a stream with no events
// still yields ceil(min_duration_us / window_us) windows). Within a window,
// events are ordered by (t, y, x, polarity).
std::vector<EventWindow> window_stream(std::span<const PolarityEvent> events,
                                       std::int64_t window_us,
                                       std::int64_t min_duration_us = 0);

}  // namespace evgrip
