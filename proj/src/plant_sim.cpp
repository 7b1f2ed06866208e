#include "evgrip/plant_sim.hpp"

#include <algorithm>
#include <cmath>

#include "evgrip/errors.hpp"

namespace evgrip {

namespace {
constexpr double kGravity = 9.81;  // m/s^2
}

double contact_force(double gap_mm, const ObjectSpec& object,
                     double k_sil_n_per_mm) {
  const double compression = object.width_mm - gap_mm;
  return compression > 0.0 ? k_sil_n_per_mm * compression : 0.0;
}

SlipResult slip_dynamics(double normal_force_N, const ObjectSpec& object,
                         double v_mm_s) {
  const double mass_kg = object.mass_g / 1000.0;
  const double weight_N = mass_kg * kGravity;
  if (v_mm_s <= 0.0) {
    if (2.0 * object.mu_static * normal_force_N >= weight_N)
      return {0.0, false};
    // breaks loose straight into kinetic sliding
    const double a =
        (weight_N - 2.0 * object.mu_kinetic * normal_force_N) / mass_kg;
    return {a * 1000.0, true};
  }
  const double a =
      (weight_N - 2.0 * object.mu_kinetic * normal_force_N) / mass_kg;
  return {a * 1000.0, true};  // negative while friction wins: arresting
}

double contact_retention(double v_mm_s, double v_ref_mm_s) {
  return 1.0 / (1.0 + std::max(v_mm_s, 0.0) / v_ref_mm_s);
}

FsrReading fsr_adc(double normal_force_N, const PlantParams& params) {
  if (normal_force_N < 0.0) fail(Err::NegativeForce, "force must be >= 0");
  const double grams = normal_force_N / kGravity * 1000.0;
  double r_ohm;
  if (grams < params.fsr_min_grams) {
    r_ohm = params.fsr_noload_ohm;
  } else {
    r_ohm = params.fsr_coeff_a * std::pow(grams, -params.fsr_coeff_b);
  }
  const double ratio = params.fsr_fixed_ohm / (params.fsr_fixed_ohm + r_ohm);
  const long adc = std::lround(1023.0 * ratio);
  FsrReading out;
  out.adc = static_cast<std::uint16_t>(std::clamp(adc, 0L, 1024L));
  return out;
}

PlantState step_plant(const PlantState& state, GripCommand cmd, double dt_s,
                      const ObjectSpec& object, const PlantParams& params) {
  if (!(dt_s > 0.0) || dt_s > 0.001 + 1e-12)
    fail(Err::NonPositiveDt, "dt must be in (0, 0.001]");
  if (cmd.position_pct < 0.0 || cmd.position_pct > 100.0)
    fail(Err::InvalidPayload, "command outside [0, 100]");

  PlantState s = state;
  s.commanded_pos_pct = cmd.position_pct;

  // phase only moves forward: OPEN -> CLOSING -> HOLDING
  if (s.phase == Phase::OPEN && s.commanded_pos_pct < s.actual_pos_pct - 1e-9)
    s.phase = Phase::CLOSING;

  const int n_sub = std::max(
      1, static_cast<int>(std::ceil(dt_s / params.substep_s - 1e-9)));
  const double h = dt_s / n_sub;

  for (int i = 0; i < n_sub; ++i) {
    // servo: closes faster than it releases
    if (s.commanded_pos_pct < s.actual_pos_pct) {
      s.actual_pos_pct = std::max(s.commanded_pos_pct,
                                  s.actual_pos_pct -
                                      params.servo_close_pct_s * h);
    } else if (s.commanded_pos_pct > s.actual_pos_pct) {
      s.actual_pos_pct = std::min(s.commanded_pos_pct,
                                  s.actual_pos_pct +
                                      params.servo_open_pct_s * h);
    }
    if (s.phase == Phase::CLOSING &&
        s.actual_pos_pct <= s.commanded_pos_pct + 1e-9)
      s.phase = Phase::HOLDING;

    const double gap_mm = s.actual_pos_pct / 100.0 * params.max_open_mm;
    const bool in_grip = s.obj_y_mm <= params.drop_limit_mm;
    s.normal_force_N =
        in_grip ? contact_force(gap_mm, object, params.k_sil_n_per_mm) : 0.0;

    if (s.phase == Phase::HOLDING || s.phase == Phase::RELEASED) {
      const SlipResult r = slip_dynamics(s.normal_force_N, object,
                                         s.obj_v_mm_s);
      s.slipping = r.slipping;
      if (r.slipping) {
        s.obj_v_mm_s += r.accel_mm_s2 * h;
        if (s.obj_v_mm_s <= 0.0) {
          // arrested mid-substep; sticks only if static friction holds
          s.obj_v_mm_s = 0.0;
          const double weight_N = object.mass_g / 1000.0 * kGravity;
          s.slipping =
              2.0 * object.mu_static * s.normal_force_N < weight_N;
        }
        s.obj_y_mm += s.obj_v_mm_s * h;
      } else {
        s.obj_v_mm_s = 0.0;
      }
    }
  }
  return s;
}

FsrReading plant_adc(const PlantState& state, const PlantParams& params) {
  double n_eff = state.normal_force_N;
  if (state.slipping)
    n_eff *= contact_retention(state.obj_v_mm_s, params.v_ref_mm_s);
  return fsr_adc(n_eff, params);
}

Telemetry make_telemetry(const PlantState& state, std::uint64_t t_ms,
                         const PlantParams& params) {
  Telemetry t;
  t.t_ms = t_ms;
  t.actual_pos_pct = state.actual_pos_pct;
  t.adc = plant_adc(state, params).adc;
  t.obj_y_mm = state.obj_y_mm;
  t.slipping = state.slipping;
  return t;
}

const std::vector<ObjectSpec>& object_catalog() {
  static const std::vector<ObjectSpec> catalog = {
      {"plastic_box_110g", 110.0, 60.0, Shape::BOX, 0.8, 0.6, 11},
      {"plastic_box_1360g", 1360.0, 60.0, Shape::BOX, 0.8, 0.6, 13},
      // non-reference entries rounding out the four-object set
      {"sphere_300g", 300.0, 60.0, Shape::SPHERE, 0.8, 0.6, 17},
      {"box_800g", 800.0, 55.0, Shape::BOX, 0.8, 0.6, 19},
  };
  return catalog;
}

const ObjectSpec* find_object(const std::string& name) {
  for (const auto& o : object_catalog())
    if (o.name == name) return &o;
  return nullptr;
}

}  // namespace evgrip
