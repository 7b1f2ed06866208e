#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evgrip/slip_pid.hpp"
#include "evgrip/telemetry.hpp"

// Physics stand-in for the parallel gripper, silicone pads, grasped object
// and the force-sensitive resistor behind one pad. Forces are per pad; the
// object hangs on two pads, hence the factor 2 in the friction balance.

namespace evgrip {

enum class Shape { BOX, SPHERE };

struct ObjectSpec {
  std::string name;
  double mass_g = 0.0;
  double width_mm = 0.0;  // grasped extent; sphere diameter for spheres
  Shape shape = Shape::BOX;
  double mu_static = 0.8;
  double mu_kinetic = 0.6;
  std::uint64_t texture_seed = 1;
};

struct PlantParams {
  double k_sil_n_per_mm = 5.0;   // silicone stiffness, per pad
  double max_open_mm = 80.0;     // gap at 100 %
  double servo_close_pct_s = 50.0;
  double servo_open_pct_s = 15.0;
  double v_ref_mm_s = 20.0;      // contact-retention velocity scale
  double drop_limit_mm = 50.0;   // past this the object has left the grip
  double substep_s = 1e-4;

  // FSR402 behind a 10 kOhm divider, 10-bit ADC.
  double fsr_fixed_ohm = 10000.0;
  double fsr_noload_ohm = 1.5e6;
  double fsr_coeff_a = 1.8e6;    // R = a * grams^-b
  double fsr_coeff_b = 0.889;
  double fsr_min_grams = 100.0;  // sensing range starts here
};

enum class Phase : std::uint8_t { OPEN = 0, CLOSING = 1, HOLDING = 2,
                                  RELEASED = 3 };

struct PlantState {
  double actual_pos_pct = 100.0;
  double commanded_pos_pct = 100.0;
  double obj_y_mm = 0.0;     // vertical displacement, downward positive
  double obj_v_mm_s = 0.0;
  double normal_force_N = 0.0;  // per pad
  bool slipping = false;
  Phase phase = Phase::OPEN;
};

// Per-pad normal force of the linear-spring silicone: zero until the gap
// closes below the object width, then stiffness times compression.
double contact_force(double gap_mm, const ObjectSpec& object,
                     double k_sil_n_per_mm);

struct SlipResult {
  double accel_mm_s2 = 0.0;
  bool slipping = false;
};

// Coulomb stick-slip balance. v == 0 checks static friction (2*mu_s*N vs
// weight); a moving object decelerates under kinetic friction and re-sticks
// when it stops with enough static margin.
SlipResult slip_dynamics(double normal_force_N, const ObjectSpec& object,
                         double v_mm_s);

struct FsrReading {
  std::uint16_t adc = 0;  // 0..1024
};

FsrReading fsr_adc(double normal_force_N, const PlantParams& params = {});

// Fraction of the pad still tracking the object at slip velocity v; the
// reported (not the mechanical) normal force scales by this.
double contact_retention(double v_mm_s, double v_ref_mm_s);

// Advances the plant by dt_s (at most one control period), integrating in
// substeps of params.substep_s. Gravity acts once the grasp phase reaches
// HOLDING; before that the object is externally supported.
PlantState step_plant(const PlantState& state, GripCommand cmd, double dt_s,
                      const ObjectSpec& object, const PlantParams& params);

// FSR sample for the current state, including the slip retention dip.
FsrReading plant_adc(const PlantState& state, const PlantParams& params);

Telemetry make_telemetry(const PlantState& state, std::uint64_t t_ms,
                         const PlantParams& params);

// Built-in object catalog: the two documented plastic boxes plus two
// non-reference entries rounding out a four-object set.
const std::vector<ObjectSpec>& object_catalog();
const ObjectSpec* find_object(const std::string& name);

}  // namespace evgrip
