#include "evgrip/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evgrip/errors.hpp"

namespace evgrip {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, key + ": not a number: '" + v + "'");
  }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    fail(Err::ConfigInvalid, key + ": not an integer: '" + v + "'");
  }
}

PidMode to_mode(const std::string& v) {
  if (v == "P") return PidMode::P;
  if (v == "PD") return PidMode::PD;
  if (v == "PI") return PidMode::PI;
  if (v == "PID") return PidMode::PID;
  fail(Err::ConfigInvalid, "mode must be P, PD, PI or PID, got '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Err::ConfigInvalid,
           "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      fail(Err::ConfigInvalid,
           "line " + std::to_string(line_no) + ": empty key or value");

    if (key == "object") {
      const ObjectSpec* obj = find_object(val);
      if (!obj) fail(Err::ConfigInvalid, "unknown object '" + val + "'");
      cfg.object = *obj;
    } else if (key == "object.mass_g") {
      cfg.object.mass_g = to_double(key, val);
    } else if (key == "object.width_mm") {
      cfg.object.width_mm = to_double(key, val);
    } else if (key == "object.shape") {
      if (val == "box")
        cfg.object.shape = Shape::BOX;
      else if (val == "sphere")
        cfg.object.shape = Shape::SPHERE;
      else
        fail(Err::ConfigInvalid, "object.shape must be box or sphere");
    } else if (key == "object.mu_static") {
      cfg.object.mu_static = to_double(key, val);
    } else if (key == "object.mu_kinetic") {
      cfg.object.mu_kinetic = to_double(key, val);
    } else if (key == "object.texture_seed") {
      cfg.object.texture_seed = static_cast<std::uint64_t>(to_int(key, val));
    } else if (key == "mode") {
      cfg.mode = to_mode(val);
    } else if (key == "gains.kp") {
      cfg.kp = to_double(key, val);
    } else if (key == "gains.ki") {
      cfg.ki = to_double(key, val);
    } else if (key == "gains.kd") {
      cfg.kd = to_double(key, val);
    } else if (key == "gains.integral_max") {
      cfg.integral_max = to_double(key, val);
    } else if (key == "gain_to_pct") {
      cfg.gain_to_pct = to_double(key, val);
    } else if (key == "cycle_s") {
      cfg.cycle_s = to_double(key, val);
    } else if (key == "base_position_pct") {
      cfg.base_position_pct = to_double(key, val);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(key, val));
    } else if (key == "net") {
      if (val == "inprocess")
        cfg.net = NetMode::INPROCESS;
      else if (val == "sockets")
        cfg.net = NetMode::SOCKETS;
      else
        fail(Err::ConfigInvalid, "net must be inprocess or sockets");
    } else if (key == "net.port") {
      const auto p = to_int(key, val);
      if (p < 0 || p > 65535) fail(Err::ConfigInvalid, "net.port out of range");
      cfg.port = static_cast<std::uint16_t>(p);
    } else if (key == "sensor.width") {
      cfg.geometry.width = static_cast<std::uint16_t>(to_int(key, val));
    } else if (key == "sensor.height") {
      cfg.geometry.height = static_cast<std::uint16_t>(to_int(key, val));
    } else if (key == "synth.contrast") {
      cfg.synth.contrast = static_cast<float>(to_double(key, val));
    } else if (key == "synth.background_rate_hz") {
      cfg.synth.background_rate_hz = to_double(key, val);
    } else if (key == "synth.refractory_us") {
      cfg.synth.refractory_us = to_int(key, val);
    } else if (key == "synth.hot_pixels") {
      cfg.hot_pixel_count = static_cast<int>(to_int(key, val));
    } else if (key == "synth.hot_pixel_rate_hz") {
      cfg.hot_pixel_rate_hz = to_double(key, val);
    } else if (key == "render.px_per_mm") {
      cfg.render.px_per_mm = to_double(key, val);
    } else if (key == "render.dot_density") {
      cfg.render.dot_density = to_double(key, val);
    } else if (key == "render.patch_frac") {
      cfg.render.patch_frac = to_double(key, val);
    } else if (key == "render.darken_per_newton") {
      cfg.render.darken_per_newton = to_double(key, val);
    } else if (key == "render.darken_max") {
      cfg.render.darken_max = static_cast<float>(to_double(key, val));
    } else if (key == "filter.learn_period_us") {
      cfg.filter.learn_period_us = to_int(key, val);
    } else if (key == "filter.hot_threshold") {
      cfg.filter.hot_threshold = static_cast<std::uint32_t>(to_int(key, val));
    } else if (key == "mask.min_events") {
      cfg.mask_min_events = static_cast<std::uint32_t>(to_int(key, val));
    } else if (key == "open_extra_ms") {
      cfg.open_extra_ms = to_double(key, val);
    } else if (key == "plant.k_sil_n_per_mm") {
      cfg.plant.k_sil_n_per_mm = to_double(key, val);
    } else if (key == "plant.max_open_mm") {
      cfg.plant.max_open_mm = to_double(key, val);
    } else if (key == "plant.servo_close_pct_s") {
      cfg.plant.servo_close_pct_s = to_double(key, val);
    } else if (key == "plant.servo_open_pct_s") {
      cfg.plant.servo_open_pct_s = to_double(key, val);
    } else if (key == "plant.v_ref_mm_s") {
      cfg.plant.v_ref_mm_s = to_double(key, val);
    } else if (key == "plant.drop_limit_mm") {
      cfg.plant.drop_limit_mm = to_double(key, val);
    } else if (key == "plant.substep_s") {
      cfg.plant.substep_s = to_double(key, val);
    } else if (key == "plant.fsr_noise_adc") {
      cfg.fsr_noise_adc = to_double(key, val);
    } else {
      fail(Err::ConfigInvalid, "unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  resolve_hot_pixels(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ConfigInvalid, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void validate_config(const RunConfig& cfg) {
  if (cfg.cycle_s <= 0) fail(Err::ConfigInvalid, "cycle_s must be positive");
  if (cfg.object.mass_g <= 0 || cfg.object.width_mm <= 0)
    fail(Err::ConfigInvalid, "object mass and width must be positive");
  if (!(cfg.object.mu_kinetic > 0) ||
      cfg.object.mu_kinetic > cfg.object.mu_static)
    fail(Err::ConfigInvalid, "need 0 < mu_kinetic <= mu_static");
  if (cfg.base_position_pct < 0 || cfg.base_position_pct > 100)
    fail(Err::ConfigInvalid, "base_position_pct outside [0, 100]");
  if (cfg.geometry.width == 0 || cfg.geometry.height == 0)
    fail(Err::ConfigInvalid, "sensor dimensions must be positive");
  if (!(cfg.synth.contrast > 0))
    fail(Err::ConfigInvalid, "synth.contrast must be positive");
  if (cfg.synth.background_rate_hz < 0 || cfg.synth.refractory_us < 0)
    fail(Err::ConfigInvalid, "synth rates must be non-negative");
  if (cfg.filter.learn_period_us <= 0)
    fail(Err::ConfigInvalid, "filter.learn_period_us must be positive");
  if (cfg.filter.hot_threshold < 1)
    fail(Err::ConfigInvalid, "filter.hot_threshold must be >= 1");
  if (cfg.mask_min_events < 1)
    fail(Err::ConfigInvalid, "mask.min_events must be >= 1");
  if (cfg.kp < 0 || cfg.ki < 0 || cfg.kd < 0)
    fail(Err::ConfigInvalid, "gains must be non-negative");
  if (cfg.plant.k_sil_n_per_mm <= 0 || cfg.plant.max_open_mm <= 0 ||
      cfg.plant.servo_close_pct_s <= 0 || cfg.plant.servo_open_pct_s <= 0 ||
      cfg.plant.substep_s <= 0 || cfg.plant.substep_s > 1e-4 + 1e-12)
    fail(Err::ConfigInvalid, "bad plant parameters");
  if (cfg.hot_pixel_count < 0)
    fail(Err::ConfigInvalid, "synth.hot_pixels must be >= 0");
}

void resolve_hot_pixels(RunConfig& cfg) {
  if (!cfg.synth.hot_pixels.empty()) return;
  cfg.synth.hot_pixels = make_hot_pixels(cfg.geometry, cfg.hot_pixel_count,
                                         cfg.hot_pixel_rate_hz, cfg.seed);
}

}  // namespace evgrip
