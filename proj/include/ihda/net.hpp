#pragma once

// Minimal blocking TCP line transport (POSIX sockets).

#include <cstdint>
#include <optional>
#include <string>

namespace ihda::net {

/// Owns a connected socket; reads and writes '\n'-terminated lines.
class LineSocket {
 public:
  LineSocket() = default;
  explicit LineSocket(int fd) : fd_(fd) {}
  ~LineSocket();
  LineSocket(LineSocket&& o) noexcept;
  LineSocket& operator=(LineSocket&& o) noexcept;
  LineSocket(const LineSocket&) = delete;
  LineSocket& operator=(const LineSocket&) = delete;

  bool valid() const { return fd_ >= 0; }
  /// Throws ProtocolError on failure.
  void send_line(const std::string& line);
  /// nullopt on orderly close or timeout (timeout_ms < 0: wait forever).
  std::optional<std::string> recv_line(int timeout_ms = -1);
  void close();

  static LineSocket connect(const std::string& host, std::uint16_t port, int timeout_ms = 5000);

 private:
  int fd_ = -1;
  std::string buffer_;
};

class Listener {
 public:
  /// Binds to 127.0.0.1 (or `host`) on `port`; 0 picks a free port.
  explicit Listener(std::uint16_t port, const std::string& host = "127.0.0.1");
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  std::uint16_t port() const { return port_; }
  /// nullopt on timeout.
  std::optional<LineSocket> accept(int timeout_ms);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace ihda::net
