#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "evgrip/events.hpp"

// EVS1 recording format, little-endian throughout.
//   header (16 bytes): "EVS1" | u16 version=1 | u16 width | u16 height |
//                      6 reserved bytes, zero
//   record (16 bytes): u64 t_us | u16 x | u16 y | u8 polarity | 3 pad bytes
// Timestamps must be non-decreasing; equal stamps are legal (the stream
// order tie-breaks on y, x, polarity).

namespace evgrip {

// Returns total bytes written (16 + 16 * N).
std::size_t write_event_file(const std::filesystem::path& path,
                             const SensorGeometry& geometry,
                             std::span<const PolarityEvent> events);

std::pair<SensorGeometry, std::vector<PolarityEvent>> read_event_file(
    const std::filesystem::path& path);

}  // namespace evgrip
