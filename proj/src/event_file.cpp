#include "evgrip/event_file.hpp"

#include <cstring>
#include <fstream>

#include "evgrip/errors.hpp"

namespace evgrip {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'S', '1'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kRecordBytes = 16;

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u64(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::size_t write_event_file(const std::filesystem::path& path,
                             const SensorGeometry& geometry,
                             std::span<const PolarityEvent> events) {
  if (geometry.width == 0 || geometry.height == 0)
    fail(Err::EmptyGeometry, "zero sensor dimension");

  std::int64_t prev_t = -1;
  for (const auto& e : events) {
    if (e.t_us < prev_t) fail(Err::UnsortedEvents, "timestamps not sorted");
    prev_t = e.t_us;
    if (e.t_us < 0) fail(Err::NonMonotonicTimestamp, "negative timestamp");
    if (!geometry.contains(e.x, e.y))
      fail(Err::CoordinateOutOfRange,
           "event at (" + std::to_string(e.x) + "," + std::to_string(e.y) +
               ") outside " + std::to_string(geometry.width) + "x" +
               std::to_string(geometry.height));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + path.string());

  std::uint8_t header[kHeaderBytes] = {};
  std::memcpy(header, kMagic, 4);
  put_u16(header + 4, kVersion);
  put_u16(header + 6, geometry.width);
  put_u16(header + 8, geometry.height);
  out.write(reinterpret_cast<const char*>(header), kHeaderBytes);

  std::vector<std::uint8_t> buf;
  buf.resize(kRecordBytes * 4096);
  std::size_t fill = 0;
  for (const auto& e : events) {
    std::uint8_t* r = buf.data() + fill;
    put_u64(r, static_cast<std::uint64_t>(e.t_us));
    put_u16(r + 8, e.x);
    put_u16(r + 10, e.y);
    r[12] = static_cast<std::uint8_t>(e.polarity);
    r[13] = r[14] = r[15] = 0;
    fill += kRecordBytes;
    if (fill == buf.size()) {
      out.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(fill));
      fill = 0;
    }
  }
  if (fill)
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(fill));
  out.flush();
  if (!out) fail(Err::IoFailure, "write failed: " + path.string());
  return kHeaderBytes + kRecordBytes * events.size();
}

std::pair<SensorGeometry, std::vector<PolarityEvent>> read_event_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(Err::IoFailure, "read failed: " + path.string());

  if (bytes.size() < kHeaderBytes) fail(Err::TruncatedRecord, "short header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(Err::BadMagic, "not an EVS1 file");
  const std::uint16_t version = get_u16(bytes.data() + 4);
  if (version != kVersion)
    fail(Err::UnsupportedVersion, "version " + std::to_string(version));

  SensorGeometry geom;
  geom.width = get_u16(bytes.data() + 6);
  geom.height = get_u16(bytes.data() + 8);
  if (geom.width == 0 || geom.height == 0)
    fail(Err::EmptyGeometry, "zero sensor dimension in header");

  const std::size_t body = bytes.size() - kHeaderBytes;
  if (body % kRecordBytes != 0)
    fail(Err::TruncatedRecord,
         std::to_string(body % kRecordBytes) + " stray trailing bytes");

  const std::size_t n = body / kRecordBytes;
  std::vector<PolarityEvent> events;
  events.reserve(n);
  std::int64_t prev_t = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* r = bytes.data() + kHeaderBytes + i * kRecordBytes;
    const std::uint64_t t_raw = get_u64(r);
    if (t_raw > static_cast<std::uint64_t>(INT64_MAX))
      fail(Err::NonMonotonicTimestamp, "timestamp overflow");
    PolarityEvent e;
    e.t_us = static_cast<std::int64_t>(t_raw);
    e.x = get_u16(r + 8);
    e.y = get_u16(r + 10);
    if (r[12] > 1)
      fail(Err::InvalidPolarity,
           "polarity byte " + std::to_string(r[12]) + " in record " +
               std::to_string(i));
    e.polarity = static_cast<Polarity>(r[12]);
    if (e.t_us < prev_t)
      fail(Err::NonMonotonicTimestamp, "record " + std::to_string(i));
    prev_t = e.t_us;
    if (!geom.contains(e.x, e.y))
      fail(Err::CoordinateOutOfRange, "record " + std::to_string(i));
    events.push_back(e);
  }
  return {geom, std::move(events)};
}

}  // namespace evgrip
