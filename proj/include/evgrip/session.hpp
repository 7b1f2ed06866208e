#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "evgrip/netlink.hpp"

// Blocking TCP transport for the wire protocol, loopback by default. The
// sensor connects, the plant listens; handshake() runs the four-stage
// session setup and the Session then enforces the per-role direction rules
// on both send and receive.

namespace evgrip {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& o) noexcept;
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  static Socket connect_loopback(std::uint16_t port,
                                 std::chrono::milliseconds timeout);

  bool valid() const { return fd_ >= 0; }
  void close();
  void set_recv_timeout(std::chrono::milliseconds timeout);
  void send_all(const std::uint8_t* data, std::size_t len);
  // returns 0 on orderly shutdown; throws HandshakeTimeout on timeout when
  // timed reads are armed, NetworkFailure otherwise
  std::size_t recv_some(std::uint8_t* data, std::size_t len);

 private:
  int fd_ = -1;
};

class Listener {
 public:
  // port 0 binds an ephemeral port; bound_port() reports the actual one
  explicit Listener(std::uint16_t port);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  std::uint16_t bound_port() const { return port_; }
  Socket accept_one(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

class Session {
 public:
  Session(Socket socket, Role role);

  // Runs the HELLO / HELLO_ACK / READY / READY_ACK exchange. Throws
  // RoleConflict, UnexpectedMessage or HandshakeTimeout; the socket is
  // closed on any failure.
  void handshake(std::chrono::milliseconds timeout =
                     std::chrono::milliseconds(2000));

  void send(const Message& m);
  Message recv();

  bool established() const { return fsm_.established(); }
  void close() { socket_.close(); }

 private:
  Message recv_raw();

  Socket socket_;
  Role role_;
  HandshakeFsm fsm_;
  FrameDecoder decoder_;
};

}  // namespace evgrip
