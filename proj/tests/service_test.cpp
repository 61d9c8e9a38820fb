#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <thread>

#include "support/support.hpp"
#include "xformplay/session_io/codec.hpp"
#include "xformplay/session_io/puzzle_file.hpp"
#include "xformplay/session_io/server.hpp"
#include "xformplay/session_io/service.hpp"

using namespace xformplay;
using namespace xformplay::io;

namespace fs = std::filesystem;

namespace {

class PuzzleDir {
 public:
  PuzzleDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("xformplay-svc-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
    save_puzzle(path / "house.xpz.json",
                PuzzleFile{1, generate_puzzle(42, Level::Function, 5), default_brick_model()});
  }
  ~PuzzleDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path path;
};

Json call(SessionService& svc, const Json& request) { return parse_json(svc.handle(request.dump()), "reply"); }

// Client side of the socket framings.
class Client {
 public:
  explicit Client(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) throw std::runtime_error("connect");
  }
  ~Client() { ::close(fd_); }

  void send_raw(const std::string& data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + done, data.size() - done, MSG_NOSIGNAL);
      if (n <= 0) throw std::runtime_error("send");
      done += static_cast<std::size_t>(n);
    }
  }

  std::string read_exact(std::size_t n) {
    while (buf_.size() < n) fill();
    std::string out = buf_.substr(0, n);
    buf_.erase(0, n);
    return out;
  }

  std::string read_until(const std::string& delim) {
    std::size_t at;
    while ((at = buf_.find(delim)) == std::string::npos) fill();
    std::string out = buf_.substr(0, at);
    buf_.erase(0, at + delim.size());
    return out;
  }

  // Plain framing.
  Json line(const Json& request) {
    send_raw(request.dump() + "\n");
    return parse_json(read_until("\n"), "reply");
  }

  // WebSocket framing.
  void handshake(const std::string& key) {
    send_raw("GET /session HTTP/1.1\r\nHost: localhost\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
             "Sec-WebSocket-Key: " + key + "\r\nSec-WebSocket-Version: 13\r\n\r\n");
    response_head = read_until("\r\n\r\n");
  }

  void send_frame(std::uint8_t opcode, const std::string& payload, bool fin = true) {
    std::string f;
    f.push_back(static_cast<char>((fin ? 0x80 : 0) | opcode));
    const std::size_t n = payload.size();
    if (n < 126) {
      f.push_back(static_cast<char>(0x80 | n));
    } else {
      f.push_back(static_cast<char>(0x80 | 126));
      f.push_back(static_cast<char>(n >> 8));
      f.push_back(static_cast<char>(n & 0xff));
    }
    const char mask[4] = {0x12, 0x34, 0x56, 0x78};
    f.append(mask, 4);
    for (std::size_t i = 0; i < n; ++i) f.push_back(static_cast<char>(payload[i] ^ mask[i % 4]));
    send_raw(f);
  }

  std::pair<int, std::string> read_frame() {
    const std::string h = read_exact(2);
    const int opcode = static_cast<std::uint8_t>(h[0]) & 0x0f;
    std::uint64_t n = static_cast<std::uint8_t>(h[1]) & 0x7f;
    if (n == 126) {
      const std::string e = read_exact(2);
      n = (static_cast<std::uint8_t>(e[0]) << 8) | static_cast<std::uint8_t>(e[1]);
    } else if (n == 127) {
      const std::string e = read_exact(8);
      n = 0;
      for (char c : e) n = (n << 8) | static_cast<std::uint8_t>(c);
    }
    return {opcode, read_exact(n)};
  }

  Json ws(const Json& request) {
    send_frame(0x1, request.dump());
    return parse_json(read_frame().second, "reply");
  }

  std::string response_head;

 private:
  void fill() {
    char tmp[4096];
    const ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
    if (n <= 0) throw std::runtime_error("connection closed");
    buf_.append(tmp, static_cast<std::size_t>(n));
  }

  int fd_ = -1;
  std::string buf_;
};

const Json kHouse = {{"type", "new_session"}, {"puzzle", "house"}};

// Plays the stored puzzle to completion through `send`.
template <class Send>
Json solve_through(Send&& send) {
  const PuzzleSpec spec = generate_puzzle(42, Level::Function, 5);
  Json last = send(kHouse);
  for (const auto& st : spec.target_steps) last = send({{"type", "physical_step"}, {"step", to_json(st)}});
  for (int i = 0; i < 5; ++i) {
    const Json hint = send({{"type", "hint_request"}});
    if (hint["aligned"].get<bool>()) break;
    last = send({{"type", "virtual_step"}, {"step", hint["step"]}});
  }
  return last;
}

}  // namespace

TEST(Service, NewSessionGivesIdentityRows) {
  PuzzleDir dir;
  SessionService svc({dir.path});
  const Json r = call(svc, {{"type", "new_session"}, {"puzzle", "house"}, {"id", 7}});
  ASSERT_EQ(r["type"], "snapshot") << r.dump();
  EXPECT_EQ(r["id"], 7);
  for (int row = 0; row < 2; ++row) EXPECT_EQ(r["snapshot"]["panel"]["rows"][row]["cells"], to_json(Mat4::identity()));
  EXPECT_EQ(r["snapshot"]["status"], "playing");
}

TEST(Service, SolvesStoredPuzzle) {
  PuzzleDir dir;
  SessionService svc({dir.path});
  const Json last = solve_through([&](const Json& j) { return call(svc, j); });
  EXPECT_EQ(last["snapshot"]["status"], "solved");
}

TEST(Service, ErrorsCarryCodesAndKeepTheSession) {
  PuzzleDir dir;
  SessionService svc({dir.path});
  Json r = call(svc, {{"type", "undo"}});
  EXPECT_EQ(r["code"], "E_NO_SESSION");

  call(svc, kHouse);
  r = parse_json(svc.handle("{not json"), "r");
  EXPECT_EQ(r["type"], "error");
  EXPECT_EQ(r["code"], "E_PARSE");

  r = call(svc, {{"type", "undo"}, {"id", "u1"}});
  EXPECT_EQ(r["code"], "E_NOTHING_TO_UNDO");
  EXPECT_EQ(r["sequence_no"], 1);
  EXPECT_EQ(r["id"], "u1");

  r = call(svc, {{"type", "physical_step"}, {"step", {{"op", "translate"}, {"offset", {1, 0, 0}}}}});
  EXPECT_EQ(r["snapshot"]["last_sequence_no"], 1);

  EXPECT_EQ(call(svc, {{"type", "new_session"}, {"puzzle", "missing"}})["code"], "E_UNKNOWN_PUZZLE");
  EXPECT_EQ(call(svc, {{"type", "new_session"}, {"puzzle", "../etc/passwd"}})["code"], "E_BAD_MESSAGE");
  EXPECT_EQ(call(svc, {{"type", "teleport"}})["code"], "E_BAD_MESSAGE");
  // The failed requests above did not disturb the running session.
  EXPECT_EQ(call(svc, {{"type", "select_control"}, {"control", "rotate_z"}})["snapshot"]["last_sequence_no"], 1);
}

TEST(Service, GeneratedSessionAndControls) {
  SessionService svc({"."});
  Json r = call(svc, {{"type", "new_session"}, {"generate", {{"seed", 3}, {"level", "mapping"}, {"difficulty", 2}}}});
  EXPECT_EQ(r["snapshot"]["puzzle_id"], "gen-mapping-d2-s3");
  r = call(svc, {{"type", "select_control"}, {"control", "rotate_x"}});
  EXPECT_EQ(r["snapshot"]["active_control"], "rotate_x");
  r = call(svc, {{"type", "edit_param"}, {"field", "x"}, {"value", 2.0}});
  EXPECT_EQ(r["code"], "E_ILLEGAL_MOVE");
}

TEST(Service, PuzzleDirFromEnvironment) {
  ::setenv(kPuzzleDirEnv, "/from/env", 1);
  EXPECT_EQ(resolve_puzzle_dir("/from/flag"), fs::path("/from/env"));
  ::unsetenv(kPuzzleDirEnv);
  EXPECT_EQ(resolve_puzzle_dir("/from/flag"), fs::path("/from/flag"));
}

TEST(WebSocket, AcceptKey) {
  // Sample handshake from RFC 6455 section 1.3.
  EXPECT_EQ(websocket_accept_key("dGhlIHNhbXBsZSBub25jZQ=="), "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");
}

TEST(WebSocket, FrameHeaders) {
  EXPECT_EQ(websocket_text_frame("hi"), std::string("\x81\x02hi", 4));
  const std::string mid = websocket_text_frame(std::string(300, 'a'));
  EXPECT_EQ(static_cast<std::uint8_t>(mid[1]), 126);
  EXPECT_EQ(mid.size(), 304u);
  const std::string big = websocket_text_frame(std::string(70000, 'a'));
  EXPECT_EQ(static_cast<std::uint8_t>(big[1]), 127);
  EXPECT_EQ(big.size(), 70010u);
}

TEST(Server, PlainTcpSolve) {
  PuzzleDir dir;
  Server server({dir.path}, "127.0.0.1", 0);
  server.start();
  Client c(server.port());
  const Json last = solve_through([&](const Json& j) { return c.line(j); });
  EXPECT_EQ(last["snapshot"]["status"], "solved");
  server.stop();
}

TEST(Server, WebSocketSolveAndMalformedFrame) {
  PuzzleDir dir;
  Server server({dir.path}, "127.0.0.1", 0);
  server.start();
  Client c(server.port());
  c.handshake("dGhlIHNhbXBsZSBub25jZQ==");
  EXPECT_NE(c.response_head.find("101"), std::string::npos);
  EXPECT_NE(c.response_head.find("s3pPLMBiTxaQ9kYGzzhZRbK+xOo="), std::string::npos);

  c.ws(kHouse);
  c.send_frame(0x1, "{\"type\": ");
  const Json bad = parse_json(c.read_frame().second, "reply");
  EXPECT_EQ(bad["code"], "E_PARSE");

  // Ping gets a pong; a fragmented message is reassembled.
  c.send_frame(0x9, "abc");
  EXPECT_EQ(c.read_frame(), (std::pair<int, std::string>{0xA, "abc"}));
  const std::string req = Json{{"type", "hint_request"}}.dump();
  c.send_frame(0x1, req.substr(0, 5), false);
  c.send_frame(0x0, req.substr(5));
  EXPECT_EQ(parse_json(c.read_frame().second, "r")["type"], "hint");

  // The session survived the malformed frame: solving continues from it.
  const PuzzleSpec spec = generate_puzzle(42, Level::Function, 5);
  Json last;
  for (const auto& st : spec.target_steps) last = c.ws({{"type", "physical_step"}, {"step", to_json(st)}});
  EXPECT_EQ(last["snapshot"]["last_sequence_no"], static_cast<int>(spec.target_steps.size()));
  for (int i = 0; i < 5; ++i) {
    const Json hint = c.ws({{"type", "hint_request"}});
    if (hint["aligned"].get<bool>()) break;
    last = c.ws({{"type", "virtual_step"}, {"step", hint["step"]}});
  }
  EXPECT_EQ(last["snapshot"]["status"], "solved");

  c.send_frame(0x8, std::string("\x03\xe8", 2));
  EXPECT_EQ(c.read_frame().first, 0x8);
  server.stop();
}

TEST(Server, ConnectionsAreIsolated) {
  PuzzleDir dir;
  Server server({dir.path}, "127.0.0.1", 0);
  server.start();
  Client a(server.port());
  Client b(server.port());
  a.line(kHouse);
  b.line(kHouse);
  const Json moved = a.line({{"type", "physical_step"}, {"step", {{"op", "translate"}, {"offset", {1, 0, 0}}}}});
  EXPECT_EQ(moved["snapshot"]["last_sequence_no"], 1);
  const Json other = b.line({{"type", "select_control"}, {"control", nullptr}});
  EXPECT_EQ(other["snapshot"]["last_sequence_no"], 0);
  EXPECT_EQ(other["snapshot"]["solid_model"]["pose"], to_json(Mat4::identity()));
  server.stop();
}

TEST(Server, StopWithOpenConnection) {
  Server server({"."}, "127.0.0.1", 0);
  server.start();
  Client idle(server.port());
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  server.stop();
  SUCCEED();
}
