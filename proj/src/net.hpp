#pragma once

// Minimal POSIX TCP plumbing for the cluster module.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wavefuse::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
  std::string str() const { return host + ":" + std::to_string(port); }
};

/// "host:port"; InvalidArgument on anything else.
Endpoint parse_endpoint(std::string_view text);

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  void close() noexcept;
  void set_nonblocking(bool on);

  /// Blocking write of the whole buffer.
  void send_all(std::span<const std::uint8_t> bytes);

  /// Non-blocking write; returns bytes written (0 when the kernel buffer is
  /// full). Throws Network on a broken connection.
  std::size_t send_some(std::span<const std::uint8_t> bytes);

  /// Non-blocking read; nullopt when nothing is available, 0 on EOF.
  std::optional<std::size_t> recv_some(std::span<std::uint8_t> out);

  /// Fills `out` completely, polling so that `stop` is checked regularly.
  /// Returns false on a clean EOF before the first byte; EOF afterwards is a
  /// Network error. A true `stop()` throws Interrupted.
  bool recv_exact(std::span<std::uint8_t> out, const std::function<bool()>& stop);

 private:
  int fd_ = -1;
};

Socket connect_to(const Endpoint& endpoint, std::chrono::milliseconds timeout);

class Listener {
 public:
  explicit Listener(const Endpoint& endpoint);
  std::uint16_t port() const noexcept { return port_; }
  /// nullopt on timeout.
  std::optional<Socket> accept_for(std::chrono::milliseconds timeout);

 private:
  Socket sock_;
  std::uint16_t port_ = 0;
};

}  // namespace wavefuse::net
