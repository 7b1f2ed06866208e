#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evgrip/config.hpp"
#include "evgrip/contact_area.hpp"
#include "evgrip/csvio.hpp"
#include "evgrip/event_synth.hpp"
#include "evgrip/netlink.hpp"
#include "evgrip/noise_filter.hpp"
#include "evgrip/plant_sim.hpp"
#include "evgrip/rng.hpp"
#include "evgrip/slip_pid.hpp"

// Closed-loop experiment runner. The plant side advances the physics once
// per millisecond and answers with telemetry; the sensor side mirrors the
// visible plant state, synthesizes the camera events for that millisecond,
// runs filter -> mask -> slip error -> controller and replies with the next
// grip command. In-process and socket modes execute the identical tick
// sequence, so their trace files match byte for byte.

namespace evgrip {

struct RunReport {
  std::uint32_t slip_events = 0;   // error bursts, <50 ms gaps merged
  double total_slip_mm = 0.0;      // peak object displacement
  double final_position_pct = 100.0;
  int min_adc = 0;
  int max_adc = 0;
  std::uint64_t ticks = 0;
  bool dropped = false;

  std::int64_t hold_start_ms = -1;   // first controller tick
  std::int64_t first_detect_ms = -1; // first nonzero slip error
  std::int64_t arrest_ms = -1;       // end of the first slip episode
  double p99_tick_us = 0.0;          // socket mode only
  double wall_s = 0.0;
};

class PlantSide {
 public:
  explicit PlantSide(const RunConfig& cfg);
  Telemetry step(GripCommand cmd, std::uint64_t t_ms);
  const PlantState& state() const { return state_; }

 private:
  RunConfig cfg_;
  PlantState state_;
  Rng fsr_noise_;
};

class SensorSide {
 public:
  SensorSide(const RunConfig& cfg, const std::filesystem::path& out_dir);
  GripCommand on_telemetry(const Telemetry& tm);
  RunReport finish();

 private:
  enum class GraspPhase { OPEN, CLOSING, HOLDING };

  RunConfig cfg_;
  std::filesystem::path out_;
  SceneRenderer renderer_;
  std::optional<RefState> refs_;
  PidGains gains_;
  PidState pid_;
  GraspPhase phase_ = GraspPhase::OPEN;
  std::optional<HotPixelSet> hot_;
  ContactAccumulator acc_;
  std::optional<ContactMask> mask_;
  std::vector<PolarityEvent> all_events_;
  std::vector<PolarityEvent> learn_buf_;
  double commanded_ = 100.0;
  double prev_commanded_ = -1.0;

  CsvWriter position_csv_, force_csv_, control_csv_, telemetry_csv_;

  std::uint64_t ticks_done_ = 0;
  std::int64_t hold_start_ms_ = -1;
  std::int64_t first_detect_ms_ = -1;
  std::int64_t last_err_pos_ms_ = -1;
  std::uint32_t bursts_ = 0;
  std::int64_t slip_last_true_ms_ = -1;
  std::int64_t arrest_ms_ = -1;
  double max_obj_y_mm_ = 0.0;
  int min_adc_ = 1 << 20;
  int max_adc_ = -1;
};

// Runs the configured cycle and writes position.csv, force.csv,
// control.csv, telemetry.csv, events.evs1, mask.csv/.pgm, hotpixels.txt,
// report.txt and the two trace SVGs under out_dir.
RunReport run_experiment(const RunConfig& cfg,
                         const std::filesystem::path& out_dir);

// Offline pass over a recorded stream: learn (or load) the hot pixels,
// build (or load) the mask, then per-millisecond slip error and controller
// outputs into replay.csv. With the recorded mask file the error/output
// sequence reproduces the live run exactly.
void replay(const std::filesystem::path& events_path,
            const std::optional<std::filesystem::path>& mask_path,
            const std::optional<std::filesystem::path>& hotpixels_path,
            const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SweepRow {
  double kp = 0.0;
  double ki = 0.0;
  std::string mode;
  RunReport report;
};

// One run per (kp, ki) grid point, same seed throughout; rows sorted by
// (total_slip_mm, |final - base|) into summary.csv.
std::vector<SweepRow> sweep_gains(const RunConfig& cfg,
                                  const std::vector<double>& kp_list,
                                  const std::vector<double>& ki_list,
                                  const std::filesystem::path& out_dir);

void write_report(const std::filesystem::path& path, const RunReport& r);

}  // namespace evgrip
