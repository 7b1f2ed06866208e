#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "evgrip/event_synth.hpp"
#include "evgrip/noise_filter.hpp"
#include "evgrip/plant_sim.hpp"
#include "evgrip/slip_pid.hpp"

// Run configuration, read from a flat "key = value" text file with dotted
// keys. '#' starts a comment; unknown keys are errors.

namespace evgrip {

enum class NetMode { INPROCESS, SOCKETS };

struct RunConfig {
  ObjectSpec object = *find_object("plastic_box_110g");
  PidMode mode = PidMode::PI;
  double kp = 0.08;
  double ki = 4.0;
  double kd = 0.0;
  double integral_max = 200.0;
  double gain_to_pct = 0.5;

  double cycle_s = 20.0;
  double base_position_pct = 74.5;
  std::uint64_t seed = 1;

  NetMode net = NetMode::INPROCESS;
  std::uint16_t port = 7402;

  SensorGeometry geometry;  // 240x180 default
  SynthParams synth;
  RenderSetup render;
  int hot_pixel_count = 5;        // generated from the seed
  double hot_pixel_rate_hz = 2000.0;

  HotPixelParams filter;
  std::uint32_t mask_min_events = 2;
  double open_extra_ms = 10.0;    // idle margin after the learning period

  PlantParams plant;
  double fsr_noise_adc = 0.0;     // optional arm-vibration jitter, counts

  PidGains gains() const {
    return make_gains(mode, kp, ki, kd, integral_max);
  }
  std::uint64_t ticks() const {
    return static_cast<std::uint64_t>(std::llround(cycle_s * 1000.0));
  }
  std::uint64_t open_ticks() const {
    return static_cast<std::uint64_t>(
        (filter.learn_period_us + 999) / 1000 +
        static_cast<std::int64_t>(open_extra_ms));
  }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);
void validate_config(const RunConfig& cfg);

// Fills synth.hot_pixels from (seed, hot_pixel_count, hot_pixel_rate_hz)
// unless the config listed explicit sources.
void resolve_hot_pixels(RunConfig& cfg);

}  // namespace evgrip
