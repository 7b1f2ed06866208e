#include "evgrip/session.hpp"

#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "evgrip/errors.hpp"

namespace evgrip {

namespace {

[[noreturn]] void net_fail(const std::string& what) {
  fail(Err::NetworkFailure, what + ": " + std::strerror(errno));
}

void enable_nodelay(int fd) {
  // 10-byte command frames every millisecond; Nagle would sink the loop
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

Socket::~Socket() { close(); }

Socket::Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.fd_;
    o.fd_ = -1;
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Socket Socket::connect_loopback(std::uint16_t port,
                                std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) net_fail("socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      enable_nodelay(fd);
      return Socket(fd);
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline)
      fail(Err::NetworkFailure,
           "connect to port " + std::to_string(port) + " timed out");
    // listener may not be up yet; retry briefly
    ::usleep(1000);
  }
}

void Socket::set_recv_timeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<long>(timeout.count() / 1000);
  tv.tv_usec = static_cast<long>((timeout.count() % 1000) * 1000);
  if (::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv)) != 0)
    net_fail("setsockopt(SO_RCVTIMEO)");
}

void Socket::send_all(const std::uint8_t* data, std::size_t len) {
  std::size_t sent = 0;
  while (sent < len) {
    const ssize_t n = ::send(fd_, data + sent, len - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      net_fail("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t Socket::recv_some(std::uint8_t* data, std::size_t len) {
  for (;;) {
    const ssize_t n = ::recv(fd_, data, len, 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK)
      fail(Err::HandshakeTimeout, "peer silent past the receive deadline");
    net_fail("recv");
  }
}

Listener::Listener(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) net_fail("socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    net_fail("bind port " + std::to_string(port));
  if (::listen(fd_, 1) != 0) net_fail("listen");
  socklen_t len = sizeof(addr);
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
    net_fail("getsockname");
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

Socket Listener::accept_one(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<long>(timeout.count() / 1000);
  tv.tv_usec = static_cast<long>((timeout.count() % 1000) * 1000);
  fd_set set;
  FD_ZERO(&set);
  FD_SET(fd_, &set);
  const int r = ::select(fd_ + 1, &set, nullptr, nullptr, &tv);
  if (r == 0) fail(Err::HandshakeTimeout, "no connection arrived");
  if (r < 0) net_fail("select");
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) net_fail("accept");
  enable_nodelay(fd);
  return Socket(fd);
}

// ---------------------------------------------------------------- session

Session::Session(Socket socket, Role role)
    : socket_(std::move(socket)), role_(role), fsm_(role) {}

Message Session::recv_raw() {
  for (;;) {
    if (auto m = decoder_.next()) return *m;
    std::uint8_t chunk[4096];
    const std::size_t n = socket_.recv_some(chunk, sizeof(chunk));
    if (n == 0) fail(Err::NetworkFailure, "peer closed the connection");
    decoder_.feed({chunk, n});
  }
}

void Session::handshake(std::chrono::milliseconds timeout) {
  socket_.set_recv_timeout(timeout);
  try {
    if (auto first = fsm_.start()) {
      const auto bytes = encode_frame(*first);
      socket_.send_all(bytes.data(), bytes.size());
    }
    while (!fsm_.established()) {
      const Message m = recv_raw();
      if (auto reply = fsm_.on_message(m)) {
        const auto bytes = encode_frame(*reply);
        socket_.send_all(bytes.data(), bytes.size());
      }
    }
  } catch (...) {
    socket_.close();
    throw;
  }
  // steady-state reads keep a generous watchdog
  socket_.set_recv_timeout(std::chrono::milliseconds(10000));
}

void Session::send(const Message& m) {
  if (!fsm_.may_send(message_type(m))) {
    socket_.close();
    fail(Err::UnexpectedMessage, "message not allowed for this role");
  }
  const auto bytes = encode_frame(m);
  socket_.send_all(bytes.data(), bytes.size());
}

Message Session::recv() {
  Message m;
  try {
    m = recv_raw();
  } catch (...) {
    socket_.close();
    throw;
  }
  if (!fsm_.may_receive(message_type(m))) {
    socket_.close();
    fail(Err::UnexpectedMessage, "peer violated direction discipline");
  }
  return m;
}

}  // namespace evgrip
