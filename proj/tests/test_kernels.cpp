// Equivalence of the scalar reference kernels and the AVX2 variants, plus
// correctness of both against brute-force oracles.

#include <doctest.h>

#include <cmath>

#include "evgrip/kernels.hpp"
#include "test_util.hpp"

using namespace evgrip;
using namespace evgrip::kernels;

namespace {

PixelTable random_table(std::uint64_t seed, std::uint16_t w, std::uint16_t h,
                        double density) {
  Rng rng(seed);
  PixelTable t(w, h);
  for (std::uint16_t y = 0; y < h; ++y)
    for (std::uint16_t x = 0; x < w; ++x)
      if (rng.uniform() < density) t.set(x, y, true);
  return t;
}

}  // namespace

TEST_CASE("count_polarities matches a linear scan") {
  const SensorGeometry geom{240, 180};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto events = evtest::random_stream(seed, 1000 + seed * 317, geom,
                                              1000000);
    std::uint64_t pos = 0;
    for (const auto& e : events) pos += e.polarity == Polarity::POS;

    const auto c = scalar_backend().count_polarities(events.data(),
                                                     events.size());
    CHECK(c.pos == pos);
    CHECK(c.neg == events.size() - pos);
    CHECK(c.pos + c.neg == events.size());
  }
}

TEST_CASE("scalar and avx2 backends agree on random inputs") {
  if (!avx2_available()) {
    MESSAGE("avx2 not available on this host; skipping equivalence");
    return;
  }
  const Backend& s = scalar_backend();
  const Backend& v = avx2_backend();
  const SensorGeometry geom{240, 180};

  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    // deliberately awkward sizes to exercise the vector tails
    const std::size_t n = 1 + (seed * 997) % 3000;
    const auto events = evtest::random_stream(seed, n, geom, 100000);
    const auto table = random_table(seed ^ 0xAA, geom.width, geom.height,
                                    seed % 3 == 0 ? 0.02 : 0.4);

    const auto cs = s.count_polarities(events.data(), n);
    const auto cv = v.count_polarities(events.data(), n);
    CHECK(cs.pos == cv.pos);
    CHECK(cs.neg == cv.neg);

    CHECK(s.count_pos_in_mask(events.data(), n, table) ==
          v.count_pos_in_mask(events.data(), n, table));

    std::vector<std::uint8_t> keep_s(n), keep_v(n);
    s.mark_keep(events.data(), n, table, keep_s.data());
    v.mark_keep(events.data(), n, table, keep_v.data());
    CHECK(keep_s == keep_v);
  }
}

TEST_CASE("count_pos_in_mask equals the per-event membership oracle") {
  const SensorGeometry geom{128, 96};
  for (std::uint64_t seed = 3; seed <= 9; ++seed) {
    const auto events = evtest::random_stream(seed, 2000, geom, 100000);
    const auto table = random_table(seed, geom.width, geom.height, 0.1);
    std::uint64_t expect = 0;
    for (const auto& e : events)
      expect += (e.polarity == Polarity::POS) && table.test(e.x, e.y);
    CHECK(count_pos_in_mask(events.data(), events.size(), table) == expect);
    CHECK(scalar_backend().count_pos_in_mask(events.data(), events.size(),
                                             table) == expect);
  }
}

TEST_CASE("level_cross_counts matches floor(|d|/C) per pixel on both paths") {
  const std::size_t n = 43203;  // not a multiple of 8
  std::vector<float> cur(n), ref(n);
  Rng rng(99);
  for (std::size_t i = 0; i < n; ++i) {
    ref[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
    cur[i] = ref[i] + static_cast<float>(rng.uniform(-1.5, 1.5));
  }
  const float contrast = 0.2f;

  std::vector<std::int32_t> out_s(n), out_v(n);
  scalar_backend().level_cross_counts(cur.data(), ref.data(), contrast,
                                      out_s.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    const float d = cur[i] - ref[i];
    const std::int32_t k =
        static_cast<std::int32_t>(std::floor(std::fabs(d) / contrast));
    CHECK(out_s[i] == (d < 0.0f ? -k : k));
  }
  if (avx2_available()) {
    avx2_backend().level_cross_counts(cur.data(), ref.data(), contrast,
                                      out_v.data(), n);
    CHECK(out_s == out_v);
  }

  SUBCASE("exact multiples of the threshold") {
    // zero reference keeps d = k*C exact: 0.4f is exactly 2 * 0.2f
    std::vector<float> r2{0.0f, 0.0f, 0.0f};
    std::vector<float> c2{0.4f, -0.2f, 0.0f};
    std::vector<std::int32_t> out(3);
    scalar_backend().level_cross_counts(c2.data(), r2.data(), 0.2f,
                                        out.data(), 3);
    CHECK(out[0] == 2);
    CHECK(out[1] == -1);
    CHECK(out[2] == 0);
  }
}

TEST_CASE("active backend dispatch works") {
  const Backend& b = active_backend();
  CHECK((std::string(b.name) == "scalar" || std::string(b.name) == "avx2"));
  PolarityEvent e;
  e.polarity = Polarity::POS;
  const auto c = count_polarities(&e, 1);
  CHECK(c.pos == 1);
  CHECK(c.neg == 0);
}
