#pragma once

#include <cstdint>

namespace evgrip {

// Per-tick sample sent from the plant to the sensor/controller.
struct Telemetry {
  std::uint64_t t_ms = 0;
  double actual_pos_pct = 100.0;
  std::uint16_t adc = 0;
  double obj_y_mm = 0.0;
  bool slipping = false;

  bool operator==(const Telemetry&) const = default;
};

}  // namespace evgrip
