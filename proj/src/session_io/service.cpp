#include "xformplay/session_io/service.hpp"

#include <cstdlib>

#include "xformplay/error.hpp"
#include "xformplay/session_io/codec.hpp"
#include "xformplay/session_io/puzzle_file.hpp"
#include "xformplay/session_io/snapshot.hpp"

namespace xformplay::io {

namespace {

bool safe_puzzle_name(std::string_view name) {
  if (name.empty() || name.size() > 200 || name.find("..") != std::string_view::npos) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string error_reply(const Json& id, ErrorCode code, const std::string& message,
                        std::optional<std::int64_t> seq) {
  Json out{{"type", "error"},
           {"code", code_name(code)},
           {"message", message},
           {"sequence_no", seq ? Json(*seq) : Json(nullptr)}};
  if (!id.is_null()) out["id"] = id;
  return out.dump();
}

}  // namespace

std::filesystem::path resolve_puzzle_dir(const std::filesystem::path& flag_value) {
  if (const char* env = std::getenv(kPuzzleDirEnv); env != nullptr && *env != '\0') return env;
  return flag_value;
}

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), started_(std::chrono::steady_clock::now()) {}

std::int64_t SessionService::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started_).count();
}

std::string SessionService::handle(std::string_view request) {
  Json id;
  std::optional<std::int64_t> seq;
  try {
    const Json msg = parse_json(request, "request");
    if (!msg.is_object()) throw Error(ErrorCode::BadMessage, "request must be a JSON object");
    if (msg.contains("id")) id = msg["id"];
    const Fields f(msg, "request");
    const std::string type = f.string("type");

    auto snapshot_reply = [&]() {
      AnnotationOptions opts;
      opts.active_control = active_control_;
      Json out{{"type", "snapshot"}, {"snapshot", to_json(snapshot(*state_, model_, opts))}};
      if (!id.is_null()) out["id"] = id;
      return out.dump();
    };

    if (type == "new_session") {
      PuzzleFile file;
      if (f.has("generate")) {
        const Fields g(f.at("generate"), "generate");
        const auto difficulty = g.integer("difficulty");
        file.spec = generate_puzzle(g.unsigned_integer("seed"), parse_level(g.string("level")),
                                    static_cast<int>(difficulty));
        file.model = default_brick_model();
      } else {
        const std::string name = f.string("puzzle");
        if (!safe_puzzle_name(name)) throw Error(ErrorCode::BadMessage, "invalid puzzle name '" + name + "'");
        auto path = config_.puzzle_dir / name;
        if (!name.ends_with(kPuzzleExtension)) path += kPuzzleExtension;
        if (!std::filesystem::exists(path)) throw Error(ErrorCode::UnknownPuzzle, "no puzzle named '" + name + "'");
        file = load_puzzle(path);
      }
      state_ = new_session(file.spec);
      model_ = file.model;
      active_control_.reset();
      started_ = std::chrono::steady_clock::now();
      return snapshot_reply();
    }

    if (!state_) throw Error(ErrorCode::NoSession, "send new_session first");
    seq = state_->next_sequence_no();

    if (type == "physical_step") {
      state_ = apply_physical(*state_, step_from_json(f.at("step")), now_ms());
    } else if (type == "virtual_step") {
      state_ = apply_virtual(*state_, step_from_json(f.at("step")), now_ms());
    } else if (type == "edit_param") {
      state_ = edit_virtual_param(*state_, parse_param_field(f.string("field")), f.number("value"), now_ms());
    } else if (type == "undo") {
      state_ = undo(*state_, now_ms());
    } else if (type == "reset") {
      state_ = reset(*state_, now_ms());
    } else if (type == "select_control") {
      const Json& c = f.at("control");
      if (c.is_null()) {
        active_control_.reset();
      } else if (c.is_string()) {
        active_control_ = parse_control(c.get<std::string>());
      } else {
        throw Error(ErrorCode::BadMessage, "control must be a string or null");
      }
    } else if (type == "hint_request") {
      const auto hint = session_hint(*state_);
      Json out{{"type", "hint"},
               {"step", hint ? to_json(hint->step) : Json(nullptr)},
               {"residual_after", hint ? Json(hint->residual_after) : Json(nullptr)},
               {"aligned", !hint.has_value()}};
      if (!id.is_null()) out["id"] = id;
      return out.dump();
    } else {
      throw Error(ErrorCode::BadMessage, "unknown message type '" + type + "'");
    }
    return snapshot_reply();
  } catch (const Error& e) {
    return error_reply(id, e.code(), e.what(), e.sequence_no() ? e.sequence_no() : seq);
  } catch (const std::exception& e) {
    return error_reply(id, ErrorCode::BadMessage, e.what(), seq);
  }
}

}  // namespace xformplay::io
