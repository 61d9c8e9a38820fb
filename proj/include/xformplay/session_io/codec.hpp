#pragma once

// JSON encodings shared by the puzzle file, event log, snapshot and wire
// protocol. Decoders are strict: a missing or mistyped field is a
// MalformedDocument error, an unknown field a VersionMismatch error.

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "xformplay/puzzle_engine.hpp"
#include "xformplay/scene_annot.hpp"

namespace xformplay::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

// Field access with typed errors. `where` names the enclosing object.
class Fields {
 public:
  Fields(const Json& object, std::string where);

  const Json& at(const char* key) const;
  bool has(const char* key) const;
  double number(const char* key) const;
  std::int64_t integer(const char* key) const;
  std::uint64_t unsigned_integer(const char* key) const;
  std::string string(const char* key) const;
  bool boolean(const char* key) const;
  // VersionMismatch if the object holds anything outside `known`.
  void only(std::initializer_list<const char*> known) const;

 private:
  const Json& object_;
  std::string where_;
};

Json parse_json(std::string_view text, const char* what);

Json to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j, const std::string& where);
Json to_json(const Mat4& m);  // 16 cells, row-major

Json to_json(const TransformStep& step);
TransformStep step_from_json(const Json& j);

Json to_json(const PuzzleSpec& spec);
PuzzleSpec spec_from_json(const Json& j);

Json to_json(const BrickModel& model);
BrickModel model_from_json(const Json& j);

Json to_json(const MoveAction& action);
MoveAction action_from_json(const Json& j);

Json to_json(const MoveEvent& event);
MoveEvent event_from_json(const Json& j);

const char* actor_name(Actor actor);
Actor parse_actor(std::string_view name);
Status parse_status(std::string_view name);

}  // namespace xformplay::io
