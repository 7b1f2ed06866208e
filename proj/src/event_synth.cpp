#include "evgrip/event_synth.hpp"

#include <algorithm>
#include <cmath>

#include "evgrip/errors.hpp"
#include "evgrip/kernels.hpp"
#include "evgrip/rng.hpp"

namespace evgrip {

// ---------------------------------------------------------------- renderer

SceneRenderer::SceneRenderer(SensorGeometry geometry, const ObjectSpec& object,
                             const RenderSetup& setup)
    : geom_(geometry), object_(object), setup_(setup) {
  size_px_ = std::max(1, static_cast<int>(
                             std::lround(object.width_mm * setup.px_per_mm)));
  patch_px_ = std::max(1, static_cast<int>(
                              std::lround(setup.patch_frac * size_px_)));
  left_ = (geom_.width - size_px_) / 2;
  top0_ = (geom_.height - size_px_) / 2;
  cx_ = geom_.width / 2;
  cy_ = geom_.height / 2;

  texture_.resize(static_cast<std::size_t>(size_px_) * size_px_);
  for (int oy = 0; oy < size_px_; ++oy) {
    for (int ox = 0; ox < size_px_; ++ox) {
      const bool dot =
          hash01(object.texture_seed, ox, oy) < setup_.dot_density;
      const double level =
          dot ? setup_.l_dot
              : setup_.l_object_lo +
                    (setup_.l_object_hi - setup_.l_object_lo) *
                        hash01(object.texture_seed ^ 0xabcdef12345ULL, ox, oy);
      texture_[static_cast<std::size_t>(oy) * size_px_ + ox] =
          static_cast<float>(level);
    }
  }

  frame_.geometry = geom_;
  frame_.log_intensity.assign(geom_.pixel_count(), setup_.l_background);
}

bool SceneRenderer::inside_shape(int ox, int oy) const {
  if (ox < 0 || ox >= size_px_ || oy < 0 || oy >= size_px_) return false;
  if (object_.shape == Shape::BOX) return true;
  const double c = (size_px_ - 1) / 2.0;
  const double r = size_px_ / 2.0;
  const double dx = ox - c, dy = oy - c;
  return dx * dx + dy * dy <= r * r;
}

float SceneRenderer::texel(int ox, int oy) const {
  if (!inside_shape(ox, oy)) return setup_.l_background;
  return texture_[static_cast<std::size_t>(oy) * size_px_ + ox];
}

bool SceneRenderer::in_patch(int x, int y) const {
  const double hx = x - cx_ + 0.5, hy = y - cy_ + 0.5;
  const double half = patch_px_ / 2.0;
  if (object_.shape == Shape::SPHERE)
    return hx * hx + hy * hy <= half * half;
  return std::abs(hx) <= half && std::abs(hy) <= half;
}

int SceneRenderer::patch_pixel_count() const {
  int n = 0;
  for (int y = 0; y < geom_.height; ++y)
    for (int x = 0; x < geom_.width; ++x) n += in_patch(x, y);
  return n;
}

void SceneRenderer::draw_rows(int row_begin, int row_end, double dy,
                              float darken) {
  const int py_lo = std::max(row_begin, 0);
  const int py_hi = std::min(row_end, static_cast<int>(geom_.height));
  const int px_lo = std::max(left_, 0);
  const int px_hi = std::min(left_ + size_px_, static_cast<int>(geom_.width));
  for (int py = py_lo; py < py_hi; ++py) {
    float* row = frame_.log_intensity.data() +
                 static_cast<std::size_t>(py) * geom_.width;
    const double oy_f = py - top0_ - dy;
    const int oy0 = static_cast<int>(std::floor(oy_f));
    const double f = oy_f - oy0;
    for (int px = px_lo; px < px_hi; ++px) {
      const int ox = px - left_;
      const double a = texel(ox, oy0);
      const double b = texel(ox, oy0 + 1);
      double level = a + (b - a) * f;
      if (darken > 0.0f && in_patch(px, py)) {
        const double cov0 = inside_shape(ox, oy0) ? 1.0 : 0.0;
        const double cov1 = inside_shape(ox, oy0 + 1) ? 1.0 : 0.0;
        level -= darken * (cov0 + (cov1 - cov0) * f);
      }
      row[px] = static_cast<float>(level);
    }
  }
}

std::pair<int, int> SceneRenderer::render(const SceneView& view,
                                          std::int64_t t_us) {
  frame_.t_us = t_us;
  const double dy = view.obj_y_mm * setup_.px_per_mm;
  const float darken = static_cast<float>(
      std::min(static_cast<double>(setup_.darken_max),
               setup_.darken_per_newton * std::max(view.normal_force_N, 0.0)));

  if (first_) {
    first_ = false;
    dy_prev_ = dy;
    darken_prev_ = darken;
    draw_rows(0, geom_.height, dy, darken);
    span_prev_ = {0, geom_.height};
    return span_prev_;
  }
  if (dy == dy_prev_ && darken == darken_prev_) return {0, 0};

  const int band_lo =
      static_cast<int>(std::floor(top0_ + std::min(dy, dy_prev_))) - 1;
  const int band_hi =
      static_cast<int>(std::ceil(top0_ + std::max(dy, dy_prev_))) + size_px_ +
      1;
  int lo = std::min(band_lo, span_prev_.first);
  int hi = std::max(band_hi, span_prev_.second);
  // patch shading may change independently of the moving band
  lo = std::min(lo, cy_ - patch_px_ / 2 - 1);
  hi = std::max(hi, cy_ + patch_px_ / 2 + 2);
  lo = std::max(lo, 0);
  hi = std::min(hi, static_cast<int>(geom_.height));

  draw_rows(lo, hi, dy, darken);
  dy_prev_ = dy;
  darken_prev_ = darken;
  span_prev_ = {lo, hi};
  return {lo, hi};
}

SceneFrame render_scene(const PlantState& plant, const ObjectSpec& object,
                        SensorGeometry geometry, const RenderSetup& setup) {
  SceneRenderer r(geometry, object, setup);
  r.render({plant.obj_y_mm, plant.normal_force_N}, 0);
  return r.frame();
}

// ------------------------------------------------------------ event model

std::vector<PolarityEvent> emit_events(RefState& refs, const SceneFrame& frame,
                                       std::int64_t t0_us, std::int64_t t1_us,
                                       const SynthParams& params,
                                       int row_begin, int row_end) {
  if (!(refs.geometry == frame.geometry))
    fail(Err::GeometryMismatch, "reference/frame size mismatch");
  if (t0_us >= t1_us) fail(Err::ZeroWindow, "empty emit interval");

  const int width = frame.geometry.width;
  if (row_end < 0) row_end = frame.geometry.height;
  row_begin = std::max(row_begin, 0);
  row_end = std::min(row_end, static_cast<int>(frame.geometry.height));
  if (row_begin >= row_end) return {};

  const std::size_t base = static_cast<std::size_t>(row_begin) * width;
  const std::size_t count = static_cast<std::size_t>(row_end - row_begin) *
                            width;

  thread_local std::vector<std::int32_t> steps;
  steps.resize(count);
  kernels::level_cross_counts(frame.log_intensity.data() + base,
                              refs.ref.data() + base, params.contrast,
                              steps.data(), count);

  const double span = static_cast<double>(t1_us - t0_us);
  std::vector<PolarityEvent> events;
  for (std::size_t i = 0; i < count; ++i) {
    if (steps[i] == 0) continue;
    const std::size_t px = base + i;
    const int sign = steps[i] > 0 ? 1 : -1;
    const std::int32_t k = steps[i] > 0 ? steps[i] : -steps[i];
    const double mag =
        std::fabs(static_cast<double>(frame.log_intensity[px]) -
                  static_cast<double>(refs.ref[px]));

    PolarityEvent ev;
    ev.x = static_cast<std::uint16_t>(px % width);
    ev.y = static_cast<std::uint16_t>(px / width);
    ev.polarity = sign > 0 ? Polarity::POS : Polarity::NEG;

    std::int32_t emitted = 0;
    for (std::int32_t j = 1; j <= k; ++j) {
      const double frac = j * static_cast<double>(params.contrast) / mag;
      std::int64_t t = t0_us + static_cast<std::int64_t>(
                                   std::llround(frac * span));
      t = std::clamp(t, t0_us + 1, t1_us);
      if (params.refractory_us > 0 && refs.last_event_us[px] >= 0 &&
          t - refs.last_event_us[px] < params.refractory_us)
        continue;  // dropped; the reference does not advance for it
      refs.last_event_us[px] = t;
      ev.t_us = t;
      events.push_back(ev);
      ++emitted;
    }
    refs.ref[px] += static_cast<float>(emitted) * params.contrast *
                    static_cast<float>(sign);
  }
  std::sort(events.begin(), events.end(), event_before);
  return events;
}

std::vector<PolarityEvent> inject_noise(const SensorGeometry& geometry,
                                        std::int64_t t0_us, std::int64_t t1_us,
                                        const SynthParams& params,
                                        std::uint64_t rng_seed) {
  if (t0_us >= t1_us) fail(Err::ZeroWindow, "empty noise interval");
  Rng rng(rng_seed);
  const std::int64_t span = t1_us - t0_us;
  const double dt_s = static_cast<double>(span) * 1e-6;

  std::vector<PolarityEvent> events;
  const double bg_lambda =
      params.background_rate_hz * dt_s * static_cast<double>(
                                             geometry.pixel_count());
  const std::uint64_t n_bg = rng.poisson(bg_lambda);
  for (std::uint64_t i = 0; i < n_bg; ++i) {
    PolarityEvent e;
    e.t_us = t0_us + 1 +
             static_cast<std::int64_t>(rng.uniform_int(
                 static_cast<std::uint64_t>(span)));
    e.x = static_cast<std::uint16_t>(rng.uniform_int(geometry.width));
    e.y = static_cast<std::uint16_t>(rng.uniform_int(geometry.height));
    e.polarity = rng.coin() ? Polarity::POS : Polarity::NEG;
    events.push_back(e);
  }

  for (const auto& src : params.hot_pixels) {
    const std::uint64_t n = rng.poisson(src.rate_hz * dt_s);
    for (std::uint64_t i = 0; i < n; ++i) {
      PolarityEvent e;
      e.t_us = t0_us + 1 +
               static_cast<std::int64_t>(rng.uniform_int(
                   static_cast<std::uint64_t>(span)));
      e.x = src.x;
      e.y = src.y;
      e.polarity = rng.coin() ? Polarity::POS : Polarity::NEG;
      events.push_back(e);
    }
  }

  std::sort(events.begin(), events.end(), event_before);
  return events;
}

std::vector<HotPixelSource> make_hot_pixels(const SensorGeometry& geometry,
                                            int count, double rate_hz,
                                            std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x407));
  std::vector<HotPixelSource> out;
  while (static_cast<int>(out.size()) < count) {
    const auto x = static_cast<std::uint16_t>(rng.uniform_int(geometry.width));
    const auto y =
        static_cast<std::uint16_t>(rng.uniform_int(geometry.height));
    bool dup = false;
    for (const auto& h : out) dup |= (h.x == x && h.y == y);
    if (!dup) out.push_back({x, y, rate_hz});
  }
  return out;
}

std::vector<PolarityEvent> merge_sorted_events(std::vector<PolarityEvent> a,
                                               std::vector<PolarityEvent> b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<PolarityEvent> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             event_before);
  return out;
}

}  // namespace evgrip
