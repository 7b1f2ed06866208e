#include "evgrip/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include "evgrip/csvio.hpp"
#include "evgrip/errors.hpp"
#include "evgrip/event_file.hpp"
#include "evgrip/session.hpp"
#include "evgrip/svg.hpp"
#include "evgrip/windowing.hpp"

namespace evgrip {

namespace {

constexpr std::int64_t kBurstMergeMs = 50;   // slip_error burst gap merge
constexpr std::int64_t kEpisodeMergeMs = 10; // plant slipping-flag gap merge

double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(p * (v.size() - 1));
  return v[idx];
}

}  // namespace

// -------------------------------------------------------------- plant side

PlantSide::PlantSide(const RunConfig& cfg)
    : cfg_(cfg), fsr_noise_(mix_seed(cfg.seed, 0xF58)) {}

Telemetry PlantSide::step(GripCommand cmd, std::uint64_t t_ms) {
  state_ = step_plant(state_, cmd, 0.001, cfg_.object, cfg_.plant);
  Telemetry tm = make_telemetry(state_, t_ms, cfg_.plant);
  if (cfg_.fsr_noise_adc > 0.0) {
    const auto amp = static_cast<std::int64_t>(cfg_.fsr_noise_adc);
    const std::int64_t jitter =
        static_cast<std::int64_t>(fsr_noise_.uniform_int(2 * amp + 1)) - amp;
    const std::int64_t adc = std::clamp<std::int64_t>(tm.adc + jitter, 0, 1024);
    tm.adc = static_cast<std::uint16_t>(adc);
  }
  return tm;
}

// ------------------------------------------------------------- sensor side

SensorSide::SensorSide(const RunConfig& cfg,
                       const std::filesystem::path& out_dir)
    : cfg_(cfg),
      out_(out_dir),
      renderer_(cfg.geometry, cfg.object, cfg.render),
      gains_(cfg.gains()),
      acc_(cfg.geometry),
      position_csv_(out_dir / "position.csv",
                    "t_ms,commanded_pct,actual_pct,changed"),
      force_csv_(out_dir / "force.csv", "t_ms,adc"),
      control_csv_(out_dir / "control.csv", "t_ms,error,u,position_pct"),
      telemetry_csv_(out_dir / "telemetry.csv", "t_ms,obj_y_mm,slipping") {
  pid_.sample_time_s = 0.001;
  // reference levels start from the scene before anything moves
  renderer_.render({0.0, 0.0}, 0);
  refs_.emplace(renderer_.frame());
}

GripCommand SensorSide::on_telemetry(const Telemetry& tm) {
  const std::uint64_t k = tm.t_ms;
  const std::int64_t t0 = static_cast<std::int64_t>(k) * 1000;
  const std::int64_t t1 = t0 + 999;  // window k is [t0, t0+1000)

  // mirror of what the camera can see, reconstructed from telemetry
  const double gap_mm =
      tm.actual_pos_pct / 100.0 * cfg_.plant.max_open_mm;
  const double force_n =
      tm.obj_y_mm <= cfg_.plant.drop_limit_mm
          ? contact_force(gap_mm, cfg_.object, cfg_.plant.k_sil_n_per_mm)
          : 0.0;
  const auto dirty = renderer_.render({tm.obj_y_mm, force_n}, t1);

  std::vector<PolarityEvent> events;
  if (dirty.second > dirty.first)
    events = emit_events(*refs_, renderer_.frame(), t0, t1, cfg_.synth,
                         dirty.first, dirty.second);
  events = merge_sorted_events(
      std::move(events),
      inject_noise(cfg_.geometry, t0, t1, cfg_.synth, mix_seed(cfg_.seed, k)));

  all_events_.insert(all_events_.end(), events.begin(), events.end());
  if (t1 < cfg_.filter.learn_period_us)
    learn_buf_.insert(learn_buf_.end(), events.begin(), events.end());
  if (!hot_ && static_cast<std::int64_t>(k + 1) * 1000 >=
                   cfg_.filter.learn_period_us)
    hot_ = learn_hot_pixels(learn_buf_, cfg_.filter, cfg_.geometry);

  EventWindow window{t0, t0 + 1000, std::move(events)};
  const EventWindow filtered =
      hot_ ? apply_filter(window, *hot_) : window;

  double err = 0.0, u = 0.0;
  switch (phase_) {
    case GraspPhase::OPEN:
      if (k + 1 >= cfg_.open_ticks()) {
        phase_ = GraspPhase::CLOSING;
        commanded_ = cfg_.base_position_pct;
      }
      break;
    case GraspPhase::CLOSING:
      accumulate(acc_, filtered);
      if (tm.actual_pos_pct <= cfg_.base_position_pct + 1e-9) {
        try {
          mask_ = finalize_mask(acc_, cfg_.mask_min_events);
        } catch (const Error& e) {
          if (e.code() == Err::NoContact)
            fail(Err::MaskFailure, "grasp made no contact");
          throw;
        }
        hold_start_ms_ = static_cast<std::int64_t>(k) + 1;
        phase_ = GraspPhase::HOLDING;
      }
      break;
    case GraspPhase::HOLDING:
      err = slip_error(filtered, *mask_);
      u = pid_step(pid_, gains_, err);
      commanded_ =
          command_position(u, cfg_.base_position_pct, cfg_.gain_to_pct)
              .position_pct;
      break;
  }

  // trace rows
  const bool changed = commanded_ != prev_commanded_;
  prev_commanded_ = commanded_;
  position_csv_.begin_row();
  position_csv_.field(static_cast<std::int64_t>(k));
  position_csv_.field(commanded_);
  position_csv_.field(tm.actual_pos_pct);
  position_csv_.field(changed);
  position_csv_.end_row();
  force_csv_.begin_row();
  force_csv_.field(static_cast<std::int64_t>(k));
  force_csv_.field(static_cast<std::int64_t>(tm.adc));
  force_csv_.end_row();
  control_csv_.begin_row();
  control_csv_.field(static_cast<std::int64_t>(k));
  control_csv_.field(err);
  control_csv_.field(u);
  control_csv_.field(commanded_);
  control_csv_.end_row();
  telemetry_csv_.begin_row();
  telemetry_csv_.field(static_cast<std::int64_t>(k));
  telemetry_csv_.field(tm.obj_y_mm);
  telemetry_csv_.field(tm.slipping);
  telemetry_csv_.end_row();

  // report bookkeeping
  ++ticks_done_;
  min_adc_ = std::min(min_adc_, static_cast<int>(tm.adc));
  max_adc_ = std::max(max_adc_, static_cast<int>(tm.adc));
  max_obj_y_mm_ = std::max(max_obj_y_mm_, tm.obj_y_mm);
  const auto kt = static_cast<std::int64_t>(k);
  if (err > 0.0) {
    if (first_detect_ms_ < 0) first_detect_ms_ = kt;
    if (last_err_pos_ms_ < 0 || kt - last_err_pos_ms_ >= kBurstMergeMs)
      ++bursts_;
    last_err_pos_ms_ = kt;
  }
  if (tm.slipping) {
    if (arrest_ms_ < 0 && slip_last_true_ms_ >= 0 &&
        kt - slip_last_true_ms_ > kEpisodeMergeMs)
      arrest_ms_ = slip_last_true_ms_ + 1;  // first episode closed earlier
    slip_last_true_ms_ = kt;
  }

  return GripCommand{commanded_};
}

RunReport SensorSide::finish() {
  position_csv_.close();
  force_csv_.close();
  control_csv_.close();
  telemetry_csv_.close();

  write_event_file(out_ / "events.evs1", cfg_.geometry, all_events_);
  if (hot_) save_hot_pixels(out_ / "hotpixels.txt", *hot_);
  if (mask_) {
    save_mask_csv(out_ / "mask.csv", *mask_, hold_start_ms_);
    save_mask_pgm(out_ / "mask.pgm", *mask_);
  }
  export_svg(out_ / "position.csv", out_ / "position.svg");
  export_svg(out_ / "force.csv", out_ / "force.svg");

  RunReport r;
  r.slip_events = bursts_;
  r.total_slip_mm = max_obj_y_mm_;
  r.final_position_pct = commanded_;
  r.min_adc = min_adc_ <= 1024 ? min_adc_ : 0;
  r.max_adc = max_adc_ >= 0 ? max_adc_ : 0;
  r.ticks = ticks_done_;
  r.dropped = max_obj_y_mm_ > cfg_.plant.drop_limit_mm;
  r.hold_start_ms = hold_start_ms_;
  r.first_detect_ms = first_detect_ms_;
  if (arrest_ms_ < 0 && slip_last_true_ms_ >= 0 &&
      slip_last_true_ms_ + 1 < static_cast<std::int64_t>(ticks_done_))
    arrest_ms_ = slip_last_true_ms_ + 1;
  r.arrest_ms = arrest_ms_;
  return r;
}

// ------------------------------------------------------------ experiments

namespace {

RunReport run_inprocess(const RunConfig& cfg,
                        const std::filesystem::path& out_dir) {
  PlantSide plant(cfg);
  SensorSide sensor(cfg, out_dir);
  GripCommand cmd{100.0};
  for (std::uint64_t k = 0; k < cfg.ticks(); ++k) {
    const Telemetry tm = plant.step(cmd, k);
    cmd = sensor.on_telemetry(tm);
  }
  return sensor.finish();
}

RunReport run_sockets(const RunConfig& cfg,
                      const std::filesystem::path& out_dir) {
  using clock = std::chrono::steady_clock;
  Listener listener(cfg.port);

  std::exception_ptr plant_error;
  std::thread plant_thread([&] {
    try {
      Session session(listener.accept_one(std::chrono::milliseconds(2000)),
                      Role::PLANT);
      session.handshake();
      PlantSide plant(cfg);
      GripCommand cmd{100.0};
      std::uint64_t k = 0;
      session.send(TelemetryMsg{plant.step(cmd, k)});
      for (;;) {
        const Message m = session.recv();
        if (std::holds_alternative<ByeMsg>(m)) break;
        cmd.position_pct = std::get<GripCmdMsg>(m).position_pct;
        ++k;
        session.send(TelemetryMsg{plant.step(cmd, k)});
      }
    } catch (...) {
      plant_error = std::current_exception();
    }
  });

  RunReport report;
  try {
    Session session(
        Socket::connect_loopback(listener.bound_port(),
                                 std::chrono::milliseconds(2000)),
        Role::SENSOR);
    session.handshake();
    SensorSide sensor(cfg, out_dir);
    std::vector<double> tick_us;
    tick_us.reserve(cfg.ticks());
    auto prev = clock::now();
    for (std::uint64_t k = 0; k < cfg.ticks(); ++k) {
      const Message m = session.recv();
      const auto now = clock::now();
      if (k >= 20)
        tick_us.push_back(
            std::chrono::duration<double, std::micro>(now - prev).count());
      prev = now;
      const GripCommand cmd =
          sensor.on_telemetry(std::get<TelemetryMsg>(m).data);
      if (k + 1 == cfg.ticks())
        session.send(ByeMsg{});
      else
        session.send(GripCmdMsg{cmd.position_pct});
    }
    report = sensor.finish();
    report.p99_tick_us = percentile(tick_us, 0.99);
  } catch (...) {
    plant_thread.join();
    throw;
  }
  plant_thread.join();
  if (plant_error) std::rethrow_exception(plant_error);
  return report;
}

}  // namespace

RunReport run_experiment(const RunConfig& cfg,
                         const std::filesystem::path& out_dir) {
  validate_config(cfg);
  std::filesystem::create_directories(out_dir);
  const auto t_start = std::chrono::steady_clock::now();
  RunReport report = cfg.net == NetMode::SOCKETS
                         ? run_sockets(cfg, out_dir)
                         : run_inprocess(cfg, out_dir);
  report.wall_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
  write_report(out_dir / "report.txt", report);
  return report;
}

void replay(const std::filesystem::path& events_path,
            const std::optional<std::filesystem::path>& mask_path,
            const std::optional<std::filesystem::path>& hotpixels_path,
            const RunConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto [geom, events] = read_event_file(events_path);

  const auto windows = window_stream(
      events, 1000, static_cast<std::int64_t>(cfg.ticks()) * 1000);

  const HotPixelSet hot =
      hotpixels_path ? load_hot_pixels(*hotpixels_path)
                     : learn_hot_pixels(events, cfg.filter, geom);

  ContactMask mask;
  std::int64_t hold_start = -1;
  if (mask_path) {
    LoadedMask loaded = load_mask_csv(*mask_path, geom);
    mask = std::move(loaded.mask);
    hold_start = loaded.hold_start_ms;
  } else {
    // best effort without the recorded mask: the closing phase produces
    // negative events only, so the first positive window ends it
    std::int64_t first_pos = -1;
    std::int64_t last_neg = -1;
    std::vector<EventWindow> filtered;
    filtered.reserve(windows.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
      filtered.push_back(apply_filter(windows[k], hot));
      const auto counts = count_polarities(filtered.back());
      if (first_pos < 0 && counts.pos > 0)
        first_pos = static_cast<std::int64_t>(k);
      if (counts.neg > 0) last_neg = static_cast<std::int64_t>(k);
    }
    hold_start = first_pos >= 0 ? first_pos : last_neg + 1;
    ContactAccumulator acc(geom);
    for (std::int64_t k = 0; k < hold_start; ++k)
      accumulate(acc, filtered[static_cast<std::size_t>(k)]);
    mask = finalize_mask(acc, cfg.mask_min_events);
  }
  if (hold_start < 0) hold_start = 0;

  CsvWriter out(out_dir / "replay.csv", "t_ms,error,u,position_pct");
  PidGains gains = cfg.gains();
  PidState pid;
  pid.sample_time_s = 0.001;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const EventWindow filtered = apply_filter(windows[k], hot);
    double err = 0.0, u = 0.0;
    if (static_cast<std::int64_t>(k) >= hold_start) {
      err = slip_error(filtered, mask);
      u = pid_step(pid, gains, err);
    }
    out.begin_row();
    out.field(static_cast<std::int64_t>(k));
    out.field(err);
    out.field(u);
    out.field(command_position(u, cfg.base_position_pct, cfg.gain_to_pct)
                  .position_pct);
    out.end_row();
  }
  out.close();
}

std::vector<SweepRow> sweep_gains(const RunConfig& cfg,
                                  const std::vector<double>& kp_list,
                                  const std::vector<double>& ki_list,
                                  const std::filesystem::path& out_dir) {
  if (kp_list.empty() || ki_list.empty())
    fail(Err::ConfigInvalid, "sweep grids must be non-empty");
  std::filesystem::create_directories(out_dir);

  std::vector<SweepRow> rows;
  for (const double kp : kp_list) {
    for (const double ki : ki_list) {
      RunConfig sub = cfg;
      sub.kp = kp;
      sub.ki = ki;
      sub.kd = 0.0;
      sub.mode = ki > 0.0 ? PidMode::PI : PidMode::P;
      char label[64];
      std::snprintf(label, sizeof(label), "kp%g_ki%g", kp, ki);
      SweepRow row;
      row.kp = kp;
      row.ki = ki;
      row.mode = ki > 0.0 ? "PI" : "P";
      row.report = run_experiment(sub, out_dir / label);
      rows.push_back(std::move(row));
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [&](const SweepRow& a, const SweepRow& b) {
                     const double da =
                         std::fabs(a.report.final_position_pct -
                                   cfg.base_position_pct);
                     const double db =
                         std::fabs(b.report.final_position_pct -
                                   cfg.base_position_pct);
                     if (a.report.total_slip_mm != b.report.total_slip_mm)
                       return a.report.total_slip_mm < b.report.total_slip_mm;
                     return da < db;
                   });

  std::ofstream out(out_dir / "summary.csv", std::ios::binary);
  if (!out) fail(Err::IoFailure, "cannot open summary.csv");
  out << "kp,ki,mode,slip_events,total_slip_mm,final_position_pct,dropped\n";
  for (const auto& r : rows) {
    out << format_csv_double(r.kp) << ',' << format_csv_double(r.ki) << ','
        << r.mode << ',' << r.report.slip_events << ','
        << format_csv_double(r.report.total_slip_mm) << ','
        << format_csv_double(r.report.final_position_pct) << ','
        << (r.report.dropped ? 1 : 0) << '\n';
  }
  return rows;
}

void write_report(const std::filesystem::path& path, const RunReport& r) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + path.string());
  out << "slip_events=" << r.slip_events << '\n'
      << "total_slip_mm=" << format_csv_double(r.total_slip_mm) << '\n'
      << "final_position_pct=" << format_csv_double(r.final_position_pct)
      << '\n'
      << "min_adc=" << r.min_adc << '\n'
      << "max_adc=" << r.max_adc << '\n'
      << "ticks=" << r.ticks << '\n'
      << "dropped=" << (r.dropped ? 1 : 0) << '\n'
      << "hold_start_ms=" << r.hold_start_ms << '\n'
      << "first_detect_ms=" << r.first_detect_ms << '\n'
      << "arrest_ms=" << r.arrest_ms << '\n'
      << "p99_tick_us=" << format_csv_double(r.p99_tick_us) << '\n'
      << "wall_s=" << format_csv_double(r.wall_s) << '\n';
}

}  // namespace evgrip
