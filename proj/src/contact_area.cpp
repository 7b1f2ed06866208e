#include "evgrip/contact_area.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "evgrip/errors.hpp"

namespace evgrip {

void accumulate(ContactAccumulator& acc, const EventWindow& window) {
  for (const auto& e : window.events) {
    if (!acc.geometry.contains(e.x, e.y))
      fail(Err::CoordinateOutOfRange, "event outside sensor");
    if (e.polarity != Polarity::NEG) continue;
    ++acc.neg_counts[static_cast<std::size_t>(e.y) * acc.geometry.width + e.x];
    ++acc.total_neg;
  }
}

ContactMask finalize_mask(const ContactAccumulator& acc,
                          std::uint32_t min_events) {
  if (min_events < 1) fail(Err::ConfigInvalid, "min_events must be >= 1");
  ContactMask mask;
  mask.geometry = acc.geometry;
  mask.support = kernels::PixelTable(acc.geometry.width, acc.geometry.height);
  for (std::uint16_t y = 0; y < acc.geometry.height; ++y) {
    for (std::uint16_t x = 0; x < acc.geometry.width; ++x) {
      if (acc.at(x, y) >= min_events) {
        mask.support.set(x, y, true);
        ++mask.area_px;
      }
    }
  }
  if (mask.area_px == 0)
    fail(Err::NoContact, "no pixel reached " + std::to_string(min_events) +
                             " negative events");
  mask.weight_value = 1.0 / mask.area_px;
  return mask;
}

double mask_weight(const ContactMask& mask, std::uint16_t x, std::uint16_t y) {
  if (!mask.geometry.contains(x, y))
    fail(Err::CoordinateOutOfRange, "pixel outside sensor");
  return mask.support.test(x, y) ? mask.weight_value : 0.0;
}

void save_mask_csv(const std::filesystem::path& path, const ContactMask& mask,
                   std::int64_t hold_start_ms) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + path.string());
  if (hold_start_ms >= 0) out << "# hold_start_ms=" << hold_start_ms << "\n";
  out << "x,y,weight\n";
  char buf[64];
  for (std::uint16_t y = 0; y < mask.geometry.height; ++y) {
    for (std::uint16_t x = 0; x < mask.geometry.width; ++x) {
      if (!mask.support.test(x, y)) continue;
      std::snprintf(buf, sizeof(buf), "%u,%u,%.12g\n", x, y,
                    mask.weight_value);
      out << buf;
    }
  }
  if (!out) fail(Err::IoFailure, "write failed: " + path.string());
}

LoadedMask load_mask_csv(const std::filesystem::path& path,
                         SensorGeometry geometry) {
  std::ifstream in(path);
  if (!in) fail(Err::IoFailure, "cannot open " + path.string());
  LoadedMask loaded;
  loaded.mask.geometry = geometry;
  loaded.mask.support = kernels::PixelTable(geometry.width, geometry.height);

  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# hold_start_ms=";
      if (line.rfind(tag, 0) == 0)
        loaded.hold_start_ms = std::stoll(line.substr(tag.size()));
      continue;
    }
    if (!header_seen) {  // "x,y,weight"
      header_seen = true;
      continue;
    }
    unsigned x = 0, y = 0;
    double w = 0.0;
    if (std::sscanf(line.c_str(), "%u,%u,%lf", &x, &y, &w) != 3)
      fail(Err::IoFailure, "bad mask row: " + line);
    if (x >= geometry.width || y >= geometry.height)
      fail(Err::CoordinateOutOfRange, "mask pixel outside sensor");
    if (!loaded.mask.support.test(static_cast<std::uint16_t>(x),
                                  static_cast<std::uint16_t>(y))) {
      loaded.mask.support.set(static_cast<std::uint16_t>(x),
                              static_cast<std::uint16_t>(y), true);
      ++loaded.mask.area_px;
    }
  }
  if (loaded.mask.area_px == 0) fail(Err::NoContact, "empty mask file");
  loaded.mask.weight_value = 1.0 / loaded.mask.area_px;
  return loaded;
}

void save_mask_pgm(const std::filesystem::path& path, const ContactMask& mask) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + path.string());
  out << "P2\n"
      << mask.geometry.width << ' ' << mask.geometry.height << "\n255\n";
  for (std::uint16_t y = 0; y < mask.geometry.height; ++y) {
    for (std::uint16_t x = 0; x < mask.geometry.width; ++x) {
      out << (mask.support.test(x, y) ? 255 : 0)
          << (x + 1 == mask.geometry.width ? '\n' : ' ');
    }
  }
  if (!out) fail(Err::IoFailure, "write failed: " + path.string());
}

}  // namespace evgrip
