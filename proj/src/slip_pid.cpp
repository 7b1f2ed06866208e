#include "evgrip/slip_pid.hpp"

#include <algorithm>
#include <cmath>

#include "evgrip/errors.hpp"
#include "evgrip/kernels.hpp"

namespace evgrip {

PidGains make_gains(PidMode mode, double kp, double ki, double kd,
                    double integral_max) {
  PidGains g;
  g.mode = mode;
  g.kp = kp;
  g.integral_max = integral_max;
  switch (mode) {
    case PidMode::P:
      break;
    case PidMode::PD:
      g.kd = kd;
      break;
    case PidMode::PI:
      g.ki = ki;
      break;
    case PidMode::PID:
      g.ki = ki;
      g.kd = kd;
      break;
  }
  if (g.kp < 0 || g.ki < 0 || g.kd < 0)
    fail(Err::ConfigInvalid, "gains must be non-negative");
  return g;
}

double slip_error(const EventWindow& window, const ContactMask& mask) {
  const std::uint64_t count = kernels::count_pos_in_mask(
      window.events.data(), window.events.size(), mask.support);
  return static_cast<double>(count);
}

double pid_step(PidState& state, const PidGains& gains, double error) {
  if (!std::isfinite(error)) fail(Err::NonFiniteError, "error is not finite");
  const double e = error - state.setpoint;
  state.integral = std::clamp(state.integral + e * state.sample_time_s, 0.0,
                              gains.integral_max);
  const double derivative = (e - state.prev_error) / state.sample_time_s;
  state.prev_error = e;
  return gains.kp * e + gains.ki * state.integral + gains.kd * derivative;
}

GripCommand command_position(double u, double base_position_pct,
                             double gain_to_pct) {
  const double effective = std::max(u, 0.0);
  GripCommand cmd;
  cmd.position_pct =
      std::clamp(base_position_pct - gain_to_pct * effective, 0.0, 100.0);
  return cmd;
}

}  // namespace evgrip
