#pragma once

#include "evgrip/contact_area.hpp"
#include "evgrip/events.hpp"

namespace evgrip {

enum class PidMode { P, PD, PI, PID };

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  PidMode mode = PidMode::PI;
  double integral_max = 200.0;  // anti-windup bound, error-seconds
};

// Zeroes the gains the mode does not use.
PidGains make_gains(PidMode mode, double kp, double ki, double kd,
                    double integral_max = 200.0);

struct PidState {
  double integral = 0.0;    // error-seconds, clamped to [0, integral_max]
  double prev_error = 0.0;
  double sample_time_s = 0.001;
  double setpoint = 0.0;    // the loop wants zero positive events
};

struct GripCommand {
  double position_pct = 100.0;  // 100 fully open, 0 fully closed
};

// Slip measure for one sample window: the number of positive-polarity
// events whose pixel is in the mask support. Uniform mask weights make the
// weighted sum equal that count exactly.
double slip_error(const EventWindow& window, const ContactMask& mask);

// One controller update. Rectangular integration, backward-difference
// derivative; the integral term keeps holding its value when the error
// returns to zero.
double pid_step(PidState& state, const PidGains& gains, double error);

// Maps controller output to a position command below the hold position.
// Negative outputs clamp at the base; the result is always within [0, 100].
GripCommand command_position(double u, double base_position_pct,
                             double gain_to_pct = 0.5);

}  // namespace evgrip
