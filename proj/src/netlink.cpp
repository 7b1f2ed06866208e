#include "evgrip/netlink.hpp"

#include <cmath>
#include <cstring>

#include "evgrip/errors.hpp"

namespace evgrip {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'S', 'L'};
constexpr std::uint8_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& b, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(b, bits);
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) {
  const std::uint64_t bits = get_u64(p);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

Role parse_role(std::uint8_t v) {
  if (v != 1 && v != 2) fail(Err::InvalidPayload, "unknown role byte");
  return static_cast<Role>(v);
}

std::size_t expected_payload(MsgType t) {
  switch (t) {
    case MsgType::HELLO:
    case MsgType::HELLO_ACK:
      return 1;
    case MsgType::READY:
    case MsgType::READY_ACK:
    case MsgType::BYE:
      return 0;
    case MsgType::GRIP_CMD:
      return 8;
    case MsgType::TELEMETRY:
      return 27;  // u64 + f64 + u16 + f64 + u8
  }
  fail(Err::UnknownType, "unhandled type");
}

}  // namespace

MsgType message_type(const Message& m) {
  return std::visit(
      [](const auto& v) -> MsgType {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HelloMsg>) return MsgType::HELLO;
        if constexpr (std::is_same_v<T, HelloAckMsg>) return MsgType::HELLO_ACK;
        if constexpr (std::is_same_v<T, ReadyMsg>) return MsgType::READY;
        if constexpr (std::is_same_v<T, ReadyAckMsg>) return MsgType::READY_ACK;
        if constexpr (std::is_same_v<T, GripCmdMsg>) return MsgType::GRIP_CMD;
        if constexpr (std::is_same_v<T, TelemetryMsg>) return MsgType::TELEMETRY;
        if constexpr (std::is_same_v<T, ByeMsg>) return MsgType::BYE;
      },
      m);
}

std::vector<std::uint8_t> encode_frame(const Message& m) {
  std::vector<std::uint8_t> payload;
  if (const auto* h = std::get_if<HelloMsg>(&m)) {
    payload.push_back(static_cast<std::uint8_t>(h->role));
  } else if (const auto* h = std::get_if<HelloAckMsg>(&m)) {
    payload.push_back(static_cast<std::uint8_t>(h->role));
  } else if (const auto* g = std::get_if<GripCmdMsg>(&m)) {
    if (!std::isfinite(g->position_pct) || g->position_pct < 0.0 ||
        g->position_pct > 100.0)
      fail(Err::InvalidPayload, "grip position outside [0, 100]");
    put_f64(payload, g->position_pct);
  } else if (const auto* t = std::get_if<TelemetryMsg>(&m)) {
    if (t->data.adc > 1024) fail(Err::InvalidPayload, "adc above 1024");
    put_u64(payload, t->data.t_ms);
    put_f64(payload, t->data.actual_pos_pct);
    put_u16(payload, t->data.adc);
    put_f64(payload, t->data.obj_y_mm);
    payload.push_back(t->data.slipping ? 1 : 0);
  }
  if (payload.size() > kMaxPayloadBytes)
    fail(Err::PayloadTooLarge, "payload exceeds 64 KiB");

  std::vector<std::uint8_t> frame;
  frame.reserve(kFrameHeaderBytes + payload.size());
  frame.insert(frame.end(), kMagic, kMagic + 4);
  frame.push_back(kVersion);
  frame.push_back(static_cast<std::uint8_t>(message_type(m)));
  put_u32(frame, static_cast<std::uint32_t>(payload.size()));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) return {};
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(Err::BadMagic, "bad frame magic");
  if (bytes[4] != kVersion)
    fail(Err::UnsupportedVersion,
         "frame version " + std::to_string(bytes[4]));

  const std::uint8_t type_byte = bytes[5];
  MsgType type;
  switch (type_byte) {
    case 1: type = MsgType::HELLO; break;
    case 2: type = MsgType::HELLO_ACK; break;
    case 3: type = MsgType::READY; break;
    case 4: type = MsgType::READY_ACK; break;
    case 16: type = MsgType::GRIP_CMD; break;
    case 17: type = MsgType::TELEMETRY; break;
    case 255: type = MsgType::BYE; break;
    default:
      fail(Err::UnknownType, "message type " + std::to_string(type_byte));
  }

  const std::uint32_t len = get_u32(bytes.data() + 6);
  if (len > kMaxPayloadBytes) fail(Err::LengthMismatch, "payload too long");
  if (len != expected_payload(type))
    fail(Err::LengthMismatch, "payload length " + std::to_string(len) +
                                  " for type " + std::to_string(type_byte));
  if (bytes.size() < kFrameHeaderBytes + len) return {};

  const std::uint8_t* p = bytes.data() + kFrameHeaderBytes;
  DecodeResult r;
  r.complete = true;
  r.consumed = kFrameHeaderBytes + len;
  switch (type) {
    case MsgType::HELLO:
      r.message = HelloMsg{parse_role(p[0])};
      break;
    case MsgType::HELLO_ACK:
      r.message = HelloAckMsg{parse_role(p[0])};
      break;
    case MsgType::READY:
      r.message = ReadyMsg{};
      break;
    case MsgType::READY_ACK:
      r.message = ReadyAckMsg{};
      break;
    case MsgType::GRIP_CMD: {
      const double pos = get_f64(p);
      if (!std::isfinite(pos) || pos < 0.0 || pos > 100.0)
        fail(Err::InvalidPayload, "grip position outside [0, 100]");
      r.message = GripCmdMsg{pos};
      break;
    }
    case MsgType::TELEMETRY: {
      Telemetry t;
      t.t_ms = get_u64(p);
      t.actual_pos_pct = get_f64(p + 8);
      t.adc = get_u16(p + 16);
      if (t.adc > 1024) fail(Err::InvalidPayload, "adc above 1024");
      t.obj_y_mm = get_f64(p + 18);
      t.slipping = p[26] != 0;
      r.message = TelemetryMsg{t};
      break;
    }
    case MsgType::BYE:
      r.message = ByeMsg{};
      break;
  }
  return r;
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  // compact before growing; keeps the buffer within one frame of data
  if (pos_ > 0 && (pos_ == buf_.size() || pos_ > kMaxPayloadBytes)) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next() {
  const DecodeResult r = decode_frame(
      std::span<const std::uint8_t>(buf_.data() + pos_, buf_.size() - pos_));
  if (!r.complete) return std::nullopt;
  pos_ += r.consumed;
  if (pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  return r.message;
}

// ------------------------------------------------------------- handshake

HandshakeFsm::HandshakeFsm(Role self) : self_(self), st_(St::IDLE) {}

std::optional<Message> HandshakeFsm::start() {
  if (self_ != Role::SENSOR) return std::nullopt;
  if (st_ != St::IDLE) fail(Err::UnexpectedMessage, "handshake restarted");
  st_ = St::SENT_HELLO;
  return Message{HelloMsg{self_}};
}

std::optional<Message> HandshakeFsm::on_message(const Message& m) {
  const MsgType t = message_type(m);
  if (self_ == Role::SENSOR) {
    if (st_ == St::SENT_HELLO && t == MsgType::HELLO_ACK) {
      if (std::get<HelloAckMsg>(m).role == self_)
        fail(Err::RoleConflict, "peer claims the sensor role too");
      st_ = St::SENT_READY;
      return Message{ReadyMsg{}};
    }
    if (st_ == St::SENT_READY && t == MsgType::READY_ACK) {
      st_ = St::DONE;
      established_ = true;
      return std::nullopt;
    }
  } else {
    if (st_ == St::IDLE && t == MsgType::HELLO) {
      if (std::get<HelloMsg>(m).role == self_)
        fail(Err::RoleConflict, "peer claims the plant role too");
      st_ = St::WAIT_READY;
      return Message{HelloAckMsg{self_}};
    }
    if (st_ == St::WAIT_READY && t == MsgType::READY) {
      st_ = St::DONE;
      established_ = true;
      return Message{ReadyAckMsg{}};
    }
  }
  fail(Err::UnexpectedMessage,
       "message type " +
           std::to_string(static_cast<int>(t)) + " out of sequence");
}

bool HandshakeFsm::may_send(MsgType t) const {
  if (!established_) return false;
  if (t == MsgType::BYE) return true;
  return self_ == Role::SENSOR ? t == MsgType::GRIP_CMD
                               : t == MsgType::TELEMETRY;
}

bool HandshakeFsm::may_receive(MsgType t) const {
  if (!established_) return false;
  if (t == MsgType::BYE) return true;
  return self_ == Role::SENSOR ? t == MsgType::TELEMETRY
                               : t == MsgType::GRIP_CMD;
}

}  // namespace evgrip
