#pragma once

// Session protocol, independent of the transport. One SessionService
// serves one connection; requests are newline-free JSON objects with a
// "type" field:
//
//   new_session    {"puzzle": NAME} | {"generate": {seed, level, difficulty}}
//   physical_step  {"step": STEP}
//   virtual_step   {"step": STEP}
//   edit_param     {"field": "x"|"y"|"z"|"angle"|"factor", "value": NUMBER}
//   undo, reset
//   select_control {"control": CONTROL | null}
//   hint_request
//
// Replies: {"type":"snapshot","snapshot":{...}}, {"type":"hint",...} or
// {"type":"error","code":...,"message":...,"sequence_no":...}. A request
// "id" is echoed back as "id".

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "xformplay/puzzle_engine.hpp"
#include "xformplay/scene_annot.hpp"

namespace xformplay::io {

inline constexpr std::uint16_t kDefaultPort = 8737;
inline constexpr const char* kPuzzleDirEnv = "XFORMPLAY_PUZZLE_DIR";

struct ServiceConfig {
  std::filesystem::path puzzle_dir;
};

// The env var wins over the flag when set and non-empty.
std::filesystem::path resolve_puzzle_dir(const std::filesystem::path& flag_value);

class SessionService {
 public:
  explicit SessionService(ServiceConfig config);

  std::string handle(std::string_view request);

  const std::optional<GameState>& state() const { return state_; }

 private:
  std::int64_t now_ms() const;

  ServiceConfig config_;
  std::optional<GameState> state_;
  BrickModel model_;
  std::optional<Control> active_control_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace xformplay::io
