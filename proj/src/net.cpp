#include "net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "wavefuse/error.hpp"

namespace wavefuse::net {

namespace {

[[noreturn]] void fail_errno(const std::string& what) {
  fail(ErrorCode::Network, what + ": " + std::strerror(errno));
}

constexpr int kPollStepMs = 100;

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    fail(ErrorCode::InvalidArgument, "endpoint '" + std::string(text) + "' is not host:port");
  }
  unsigned port = 0;
  const auto port_text = text.substr(colon + 1);
  const auto [ptr, ec] =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535) {
    fail(ErrorCode::InvalidArgument, "bad port in '" + std::string(text) + "'");
  }
  return Endpoint{std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Socket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::set_nonblocking(bool on) {
  const int flags = ::fcntl(fd_, F_GETFL, 0);
  if (flags < 0 || ::fcntl(fd_, F_SETFL, on ? (flags | O_NONBLOCK) : (flags & ~O_NONBLOCK)) < 0) {
    fail_errno("fcntl");
  }
}

void Socket::send_all(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const auto n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) {
        pollfd pfd{fd_, POLLOUT, 0};
        ::poll(&pfd, 1, kPollStepMs);
        continue;
      }
      fail_errno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t Socket::send_some(std::span<const std::uint8_t> bytes) {
  for (;;) {
    const auto n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) return 0;
    fail_errno("send");
  }
}

std::optional<std::size_t> Socket::recv_some(std::span<std::uint8_t> out) {
  for (;;) {
    const auto n = ::recv(fd_, out.data(), out.size(), MSG_DONTWAIT);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) return std::nullopt;
    fail_errno("recv");
  }
}

bool Socket::recv_exact(std::span<std::uint8_t> out, const std::function<bool()>& stop) {
  std::size_t got = 0;
  while (got < out.size()) {
    if (stop && stop()) fail(ErrorCode::Interrupted, "stop requested");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kPollStepMs);
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail_errno("poll");
    }
    if (ready == 0) continue;
    const auto n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      fail_errno("recv");
    }
    if (n == 0) {
      if (got == 0) return false;
      fail(ErrorCode::Network, "connection closed mid-frame");
    }
    got += static_cast<std::size_t>(n);
  }
  return true;
}

Socket connect_to(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto port = std::to_string(endpoint.port);
  if (const int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    fail(ErrorCode::Network, "resolve " + endpoint.str() + ": " + ::gai_strerror(rc));
  }
  Socket sock(::socket(res->ai_family, res->ai_socktype, res->ai_protocol));
  if (!sock.valid()) {
    ::freeaddrinfo(res);
    fail_errno("socket");
  }
  sock.set_nonblocking(true);
  const int rc = ::connect(sock.fd(), res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc < 0 && errno != EINPROGRESS) fail_errno("connect " + endpoint.str());
  if (rc < 0) {
    pollfd pfd{sock.fd(), POLLOUT, 0};
    if (::poll(&pfd, 1, static_cast<int>(timeout.count())) <= 0) {
      fail(ErrorCode::Network, "connect " + endpoint.str() + ": timed out");
    }
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(sock.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) fail(ErrorCode::Network, "connect " + endpoint.str() + ": " + std::strerror(err));
  }
  sock.set_nonblocking(false);
  const int one = 1;
  ::setsockopt(sock.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return sock;
}

Listener::Listener(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  if (endpoint.host == "*" || endpoint.host == "0.0.0.0") {
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
  } else if (endpoint.host == "localhost") {
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  } else if (::inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) != 1) {
    fail(ErrorCode::InvalidArgument,
         "listen address '" + endpoint.host + "' is not an IPv4 address");
  }
  sock_ = Socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!sock_.valid()) fail_errno("socket");
  const int one = 1;
  ::setsockopt(sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    fail_errno("bind " + endpoint.str());
  }
  if (::listen(sock_.fd(), 8) < 0) fail_errno("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

std::optional<Socket> Listener::accept_for(std::chrono::milliseconds timeout) {
  pollfd pfd{sock_.fd(), POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0) return std::nullopt;
  Socket conn(::accept(sock_.fd(), nullptr, nullptr));
  if (!conn.valid()) return std::nullopt;
  const int one = 1;
  ::setsockopt(conn.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return conn;
}

}  // namespace wavefuse::net
