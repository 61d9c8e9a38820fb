#include "xformplay/session_io/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <openssl/evp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <memory>

#include "xformplay/error.hpp"

namespace xformplay::io {

namespace {

constexpr std::size_t kMaxMessage = 1 << 20;
constexpr const char* kWebSocketGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

class Connection {
 public:
  explicit Connection(int fd) : fd_(fd) {}

  bool read_line(std::string& line) {
    for (;;) {
      const auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
      if (buf_.size() > kMaxMessage || !fill()) return false;
    }
  }

  bool read_exact(std::size_t n, std::string& out) {
    while (buf_.size() < n)
      if (!fill()) return false;
    out = buf_.substr(0, n);
    buf_.erase(0, n);
    return true;
  }

  bool send_all(std::string_view data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      done += static_cast<std::size_t>(n);
    }
    return true;
  }

 private:
  bool fill() {
    char tmp[4096];
    for (;;) {
      const ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buf_.append(tmp, static_cast<std::size_t>(n));
      return true;
    }
  }

  int fd_;
  std::string buf_;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string control_frame(std::uint8_t opcode, std::string_view payload) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | opcode));
  f.push_back(static_cast<char>(payload.size()));
  f.append(payload);
  return f;
}

void serve_lines(Connection& conn, SessionService& service, std::string first_line) {
  std::string line = std::move(first_line);
  do {
    if (line.empty()) continue;
    if (!conn.send_all(service.handle(line) + "\n")) return;
  } while (conn.read_line(line));
}

void serve_websocket(Connection& conn, SessionService& service) {
  std::string key;
  std::string line;
  while (conn.read_line(line) && !line.empty()) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (lower(trim(line.substr(0, colon))) == "sec-websocket-key") key = trim(line.substr(colon + 1));
  }
  if (key.empty()) {
    conn.send_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    return;
  }
  const std::string response = "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                               "Sec-WebSocket-Accept: " +
                               websocket_accept_key(key) + "\r\n\r\n";
  if (!conn.send_all(response)) return;

  std::string message;
  for (;;) {
    std::string head;
    if (!conn.read_exact(2, head)) return;
    const auto b0 = static_cast<std::uint8_t>(head[0]);
    const auto b1 = static_cast<std::uint8_t>(head[1]);
    const bool fin = (b0 & 0x80) != 0;
    const std::uint8_t opcode = b0 & 0x0f;
    std::uint64_t len = b1 & 0x7f;
    if ((b1 & 0x80) == 0) {
      conn.send_all(control_frame(0x8, std::string("\x03\xea", 2)));  // 1002: client frames must be masked
      return;
    }
    std::string ext;
    if (len == 126) {
      if (!conn.read_exact(2, ext)) return;
      len = (static_cast<std::uint64_t>(static_cast<std::uint8_t>(ext[0])) << 8) | static_cast<std::uint8_t>(ext[1]);
    } else if (len == 127) {
      if (!conn.read_exact(8, ext)) return;
      len = 0;
      for (char c : ext) len = (len << 8) | static_cast<std::uint8_t>(c);
    }
    if (len > kMaxMessage || message.size() + len > kMaxMessage) {
      conn.send_all(control_frame(0x8, std::string("\x03\xf1", 2)));  // 1009: too big
      return;
    }
    std::string mask;
    std::string payload;
    if (!conn.read_exact(4, mask) || !conn.read_exact(static_cast<std::size_t>(len), payload)) return;
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ mask[i % 4]);

    if (opcode == 0x8) {
      conn.send_all(control_frame(0x8, payload.substr(0, std::min<std::size_t>(payload.size(), 2))));
      return;
    }
    if (opcode == 0x9) {
      if (!conn.send_all(control_frame(0xA, payload.substr(0, std::min<std::size_t>(payload.size(), 125))))) return;
      continue;
    }
    if (opcode == 0xA) continue;

    message += payload;
    if (!fin) continue;

    std::size_t pos = 0;
    while (pos <= message.size()) {
      auto nl = message.find('\n', pos);
      if (nl == std::string::npos) nl = message.size();
      std::string request = message.substr(pos, nl - pos);
      if (!request.empty() && request.back() == '\r') request.pop_back();
      if (!request.empty() && !conn.send_all(websocket_text_frame(service.handle(request)))) return;
      pos = nl + 1;
    }
    message.clear();
  }
}

}  // namespace

std::string websocket_accept_key(std::string_view client_key) {
  const std::string input = std::string(client_key) + kWebSocketGuid;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_Digest(input.data(), input.size(), digest, &digest_len, EVP_sha1(), nullptr) != 1)
    throw Error(ErrorCode::Io, "sha1 failed");
  unsigned char out[64];
  const int n = EVP_EncodeBlock(out, digest, static_cast<int>(digest_len));
  return std::string(reinterpret_cast<const char*>(out), static_cast<std::size_t>(n));
}

std::string websocket_text_frame(std::string_view payload) {
  std::string f;
  f.push_back(static_cast<char>(0x81));
  const std::uint64_t len = payload.size();
  if (len < 126) {
    f.push_back(static_cast<char>(len));
  } else if (len <= 0xffff) {
    f.push_back(static_cast<char>(126));
    f.push_back(static_cast<char>((len >> 8) & 0xff));
    f.push_back(static_cast<char>(len & 0xff));
  } else {
    f.push_back(static_cast<char>(127));
    for (int shift = 56; shift >= 0; shift -= 8) f.push_back(static_cast<char>((len >> shift) & 0xff));
  }
  f.append(payload);
  return f;
}

Server::Server(ServiceConfig config, std::string host, std::uint16_t port)
    : config_(std::move(config)), host_(std::move(host)), port_(port) {}

Server::~Server() { stop(); }

void Server::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error(ErrorCode::Io, std::string("socket: ") + std::strerror(errno));
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port_);
  if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::InvalidParameter, "bad bind address '" + host_ + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error(ErrorCode::Io, "cannot listen on " + host_ + ":" + std::to_string(port_) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers)
    if (t.joinable()) t.join();
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard lock(mu_);
    if (!running_) {
      ::close(fd);
      return;
    }
    client_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void Server::serve_connection(int fd) {
  {
    Connection conn(fd);
    SessionService service(config_);
    std::string first;
    if (conn.read_line(first)) {
      if (first.rfind("GET ", 0) == 0) {
        serve_websocket(conn, service);
      } else {
        serve_lines(conn, service, std::move(first));
      }
    }
  }
  std::lock_guard lock(mu_);
  client_fds_.erase(std::remove(client_fds_.begin(), client_fds_.end(), fd), client_fds_.end());
  ::close(fd);
}

}  // namespace xformplay::io
