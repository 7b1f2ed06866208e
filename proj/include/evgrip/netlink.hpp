#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "evgrip/telemetry.hpp"

// Framed point-to-point protocol between the sensor/controller process and
// the plant process. Frame layout, little-endian:
//   "EVSL" | u8 version=1 | u8 msg_type | u32 payload_len | payload
// Session setup is a four-stage exchange (HELLO, HELLO_ACK, READY,
// READY_ACK); afterwards the sensor sends only GRIP_CMD/BYE and the plant
// only TELEMETRY/BYE.

namespace evgrip {

enum class MsgType : std::uint8_t {
  HELLO = 1,
  HELLO_ACK = 2,
  READY = 3,
  READY_ACK = 4,
  GRIP_CMD = 16,
  TELEMETRY = 17,
  BYE = 255,
};

enum class Role : std::uint8_t { SENSOR = 1, PLANT = 2 };

struct HelloMsg {
  Role role;
};
struct HelloAckMsg {
  Role role;
};
struct ReadyMsg {};
struct ReadyAckMsg {};
struct GripCmdMsg {
  double position_pct;
};
struct TelemetryMsg {
  Telemetry data;
};
struct ByeMsg {};

using Message = std::variant<HelloMsg, HelloAckMsg, ReadyMsg, ReadyAckMsg,
                             GripCmdMsg, TelemetryMsg, ByeMsg>;

MsgType message_type(const Message& m);

constexpr std::size_t kFrameHeaderBytes = 10;
constexpr std::size_t kMaxPayloadBytes = 65536;

std::vector<std::uint8_t> encode_frame(const Message& m);

struct DecodeResult {
  bool complete = false;       // false means: need more bytes, none consumed
  Message message;
  std::size_t consumed = 0;
};

// Decodes one frame from the front of the buffer. Incomplete input returns
// complete=false without consuming; malformed input throws (BadMagic,
// UnsupportedVersion, UnknownType, LengthMismatch, InvalidPayload) and the
// session must be torn down.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

// Incremental decoder over a byte stream; memory use stays bounded by one
// maximum-size frame.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Message> next();  // nullopt: need more data
  std::size_t buffered() const { return buf_.size() - pos_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

// Pure handshake state machine, transport-agnostic. The sensor initiates.
class HandshakeFsm {
 public:
  explicit HandshakeFsm(Role self);

  // Message to send before anything is received (sensor only).
  std::optional<Message> start();
  // Handles one peer message; returns the reply to send, if any. Throws
  // RoleConflict / UnexpectedMessage on any deviation.
  std::optional<Message> on_message(const Message& m);
  bool established() const { return established_; }

  // Post-handshake direction discipline.
  bool may_send(MsgType t) const;
  bool may_receive(MsgType t) const;

 private:
  enum class St { IDLE, SENT_HELLO, SENT_READY, WAIT_READY, DONE };
  Role self_;
  St st_;
  bool established_ = false;
};

}  // namespace evgrip
