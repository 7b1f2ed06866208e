#pragma once

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "evgrip/errors.hpp"
#include "evgrip/events.hpp"
#include "evgrip/rng.hpp"

namespace evtest {

// Scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("evgrip_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

// Time-sorted random stream with full tie-break ordering.
inline std::vector<evgrip::PolarityEvent> random_stream(
    std::uint64_t seed, std::size_t n, const evgrip::SensorGeometry& geom,
    std::int64_t t_max_us) {
  evgrip::Rng rng(seed);
  std::vector<evgrip::PolarityEvent> events(n);
  for (auto& e : events) {
    e.t_us = static_cast<std::int64_t>(
        rng.uniform_int(static_cast<std::uint64_t>(t_max_us)));
    e.x = static_cast<std::uint16_t>(rng.uniform_int(geom.width));
    e.y = static_cast<std::uint16_t>(rng.uniform_int(geom.height));
    e.polarity = rng.coin() ? evgrip::Polarity::POS : evgrip::Polarity::NEG;
  }
  std::sort(events.begin(), events.end(), evgrip::event_before);
  return events;
}

// Error-code capture for CHECK-style assertions on typed failures.
template <typename F>
evgrip::Err thrown_code(F&& f) {
  try {
    f();
  } catch (const evgrip::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an evgrip::Error");
}

}  // namespace evtest
