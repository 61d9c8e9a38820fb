#pragma once

// Listens on one port for two framings of the session protocol:
//   * WebSocket (RFC 6455) when the first line is an HTTP GET upgrade;
//     each text message holds one or more newline-separated requests;
//   * plain TCP otherwise, one request per line, one reply per line.
// Each connection gets its own SessionService and thread.

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "xformplay/session_io/service.hpp"

namespace xformplay::io {

// Sec-WebSocket-Accept for a client key.
std::string websocket_accept_key(std::string_view client_key);

// Server-side (unmasked) text frame.
std::string websocket_text_frame(std::string_view payload);

class Server {
 public:
  Server(ServiceConfig config, std::string host, std::uint16_t port);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting; port 0 picks a free port.
  void start();
  std::uint16_t port() const { return port_; }
  void stop();

 private:
  void accept_loop();
  void serve_connection(int fd);

  ServiceConfig config_;
  std::string host_;
  std::uint16_t port_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<int> client_fds_;
  std::vector<std::thread> workers_;
};

}  // namespace xformplay::io
