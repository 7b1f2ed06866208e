#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evgrip/events.hpp"
#include "evgrip/plant_sim.hpp"

// Level-crossing camera model. A renderer turns the plant state into a
// per-pixel log-intensity frame; emit_events compares each pixel against
// its stored reference level and emits one event per full contrast step,
// advancing the reference by the emitted amount (sub-threshold residue
// carries over to later frames).

namespace evgrip {

struct HotPixelSource {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  double rate_hz = 0.0;
};

struct SynthParams {
  float contrast = 0.2f;           // log-intensity threshold per event
  double background_rate_hz = 0.0; // per-pixel shot noise
  std::vector<HotPixelSource> hot_pixels;
  std::int64_t refractory_us = 100;  // 0 disables
};

struct SceneFrame {
  SensorGeometry geometry;
  std::vector<float> log_intensity;
  std::int64_t t_us = 0;

  float at(std::uint16_t x, std::uint16_t y) const {
    return log_intensity[static_cast<std::size_t>(y) * geometry.width + x];
  }
};

// What the camera can observe of the plant through the transparent pad.
struct SceneView {
  double obj_y_mm = 0.0;
  double normal_force_N = 0.0;
};

struct RenderSetup {
  double px_per_mm = 2.0;
  float l_background = 1.0f;
  float l_object_lo = 0.55f;   // plain texel range
  float l_object_hi = 0.75f;
  float l_dot = 0.05f;         // speckle dots driving the motion signal
  double dot_density = 0.02;
  double darken_per_newton = 0.6;  // contact shadow vs per-pad force
  float darken_max = 0.45f;        // saturates so a settled grasp stays quiet
  double patch_frac = 0.6;         // contact patch extent vs silhouette
};

// Draws the textured object silhouette at its current drop offset with the
// contact patch darkened by grip force. Keeps a persistent frame and
// reports which rows may differ from the previous render.
class SceneRenderer {
 public:
  SceneRenderer(SensorGeometry geometry, const ObjectSpec& object,
                const RenderSetup& setup = {});

  // returns the changed row span [begin, end); empty when nothing moved
  std::pair<int, int> render(const SceneView& view, std::int64_t t_us);

  const SceneFrame& frame() const { return frame_; }
  bool in_patch(int x, int y) const;
  int patch_pixel_count() const;
  int silhouette_px() const { return size_px_; }

 private:
  float texel(int ox, int oy) const;       // background outside the shape
  bool inside_shape(int ox, int oy) const;
  void draw_rows(int row_begin, int row_end, double dy, float darken);

  SensorGeometry geom_;
  ObjectSpec object_;
  RenderSetup setup_;
  SceneFrame frame_;
  std::vector<float> texture_;  // object-frame speckle, size_px^2
  int size_px_ = 0;
  int patch_px_ = 0;
  int left_ = 0, top0_ = 0;   // silhouette origin at obj_y = 0
  int cx_ = 0, cy_ = 0;
  bool first_ = true;
  double dy_prev_ = 0.0;
  float darken_prev_ = 0.0f;
  std::pair<int, int> span_prev_{0, 0};
};

// One-shot render, for tests and offline inspection. Equivalent to a fresh
// SceneRenderer fed the state's view (force taken from the state).
SceneFrame render_scene(const PlantState& plant, const ObjectSpec& object,
                        SensorGeometry geometry,
                        const RenderSetup& setup = {});

// Per-pixel reference levels plus last-emission times for the refractory
// rule.
struct RefState {
  explicit RefState(const SceneFrame& initial)
      : geometry(initial.geometry),
        ref(initial.log_intensity),
        last_event_us(initial.geometry.pixel_count(), -1) {}

  SensorGeometry geometry;
  std::vector<float> ref;
  std::vector<std::int64_t> last_event_us;
};

// Emits sign(d)*floor(|d|/contrast) events per pixel with timestamps
// linearly interpolated over (t0, t1], at least refractory_us apart per
// pixel (events violating the spacing are dropped and leave the reference
// untouched). Restricting [row_begin, row_end) is an exactness-preserving
// shortcut when the caller knows which rows changed.
std::vector<PolarityEvent> emit_events(RefState& refs, const SceneFrame& frame,
                                       std::int64_t t0_us, std::int64_t t1_us,
                                       const SynthParams& params,
                                       int row_begin = 0, int row_end = -1);

// Background shot noise plus the configured always-on hot pixels, sorted.
// Deterministic in rng_seed.
std::vector<PolarityEvent> inject_noise(const SensorGeometry& geometry,
                                        std::int64_t t0_us, std::int64_t t1_us,
                                        const SynthParams& params,
                                        std::uint64_t rng_seed);

// Distinct random positions for injected hot pixels.
std::vector<HotPixelSource> make_hot_pixels(const SensorGeometry& geometry,
                                            int count, double rate_hz,
                                            std::uint64_t seed);

std::vector<PolarityEvent> merge_sorted_events(
    std::vector<PolarityEvent> a, std::vector<PolarityEvent> b);

}  // namespace evgrip
