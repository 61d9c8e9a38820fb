#include "xformplay/session_io/codec.hpp"

#include "xformplay/error.hpp"

namespace xformplay::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, where + ": " + what);
}

Axis parse_axis(std::string_view s, const std::string& where) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  malformed(where, "axis must be x, y or z");
}

Json rgb_to_json(const Rgb& c) { return Json::array({c.r, c.g, c.b}); }

Rgb rgb_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) malformed(where, "color must be [r, g, b]");
  Rgb c;
  std::uint8_t* out[3] = {&c.r, &c.g, &c.b};
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<std::int64_t>() < 0 || j[i].get<std::int64_t>() > 255)
      malformed(where, "color channels must be integers in 0..255");
    *out[i] = static_cast<std::uint8_t>(j[i].get<std::int64_t>());
  }
  return c;
}

}  // namespace

Fields::Fields(const Json& object, std::string where) : object_(object), where_(std::move(where)) {
  if (!object_.is_object()) malformed(where_, "expected an object");
}

const Json& Fields::at(const char* key) const {
  const auto it = object_.find(key);
  if (it == object_.end()) malformed(where_, std::string("missing field '") + key + "'");
  return *it;
}

bool Fields::has(const char* key) const { return object_.contains(key); }

double Fields::number(const char* key) const {
  const Json& v = at(key);
  if (!v.is_number()) malformed(where_, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t Fields::integer(const char* key) const {
  const Json& v = at(key);
  if (!v.is_number_integer()) malformed(where_, std::string("field '") + key + "' must be an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    malformed(where_, std::string("field '") + key + "' is out of range");
  return v.get<std::int64_t>();
}

std::uint64_t Fields::unsigned_integer(const char* key) const {
  const Json& v = at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    malformed(where_, std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string Fields::string(const char* key) const {
  const Json& v = at(key);
  if (!v.is_string()) malformed(where_, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool Fields::boolean(const char* key) const {
  const Json& v = at(key);
  if (!v.is_boolean()) malformed(where_, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

void Fields::only(std::initializer_list<const char*> known) const {
  for (const auto& [key, value] : object_.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok)
      throw Error(ErrorCode::VersionMismatch, where_ + ": unknown field '" + key + "' for format_version " +
                                                  std::to_string(kFormatVersion));
  }
}

Json parse_json(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) malformed(where, "expected [x, y, z]");
  for (const auto& c : j)
    if (!c.is_number()) malformed(where, "vector components must be numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json to_json(const Mat4& m) {
  Json out = Json::array();
  for (double v : m.cells()) out.push_back(v);
  return out;
}

Json to_json(const TransformStep& step) {
  return std::visit(Overloaded{
                        [](const Translate& t) { return Json{{"op", "translate"}, {"offset", to_json(t.offset)}}; },
                        [](const Rotate& r) {
                          return Json{{"op", "rotate"}, {"axis", axis_name(r.axis)}, {"angle_deg", r.angle.deg()}};
                        },
                        [](const Scale& s) { return Json{{"op", "scale"}, {"factor", s.factor}}; },
                    },
                    step);
}

TransformStep step_from_json(const Json& j) {
  const Fields f(j, "step");
  const std::string op = f.string("op");
  if (op == "translate") {
    f.only({"op", "offset"});
    return Translate{vec3_from_json(f.at("offset"), "step.offset")};
  }
  if (op == "rotate") {
    f.only({"op", "axis", "angle_deg"});
    return Rotate{parse_axis(f.string("axis"), "step.axis"), Angle::degrees(f.number("angle_deg"))};
  }
  if (op == "scale") {
    f.only({"op", "factor"});
    return Scale{f.number("factor")};
  }
  malformed("step", "unknown op '" + op + "'");
}

Json to_json(const PuzzleSpec& spec) {
  Json steps = Json::array();
  for (const auto& s : spec.target_steps) steps.push_back(to_json(s));
  Json controls = Json::array();
  for (Control c : spec.allowed_controls) controls.push_back(control_name(c));
  return Json{
      {"id", spec.id},
      {"level", level_name(spec.level)},
      {"target_steps", steps},
      {"allowed_controls", controls},
      {"tolerance",
       {{"translation", spec.tolerance.translation},
        {"rotation_deg", spec.tolerance.rotation},
        {"scale_log", spec.tolerance.scale}}},
      {"weights",
       {{"translation", spec.weights.translation},
        {"rotation", spec.weights.rotation},
        {"scale", spec.weights.scale}}},
      {"seed", spec.seed},
      {"model_ref", spec.model_ref},
      {"lock_physical_after_virtual", spec.lock_physical_after_virtual},
  };
}

PuzzleSpec spec_from_json(const Json& j) {
  const Fields f(j, "spec");
  f.only({"id", "level", "target_steps", "allowed_controls", "tolerance", "weights", "seed", "model_ref",
          "lock_physical_after_virtual"});
  PuzzleSpec spec;
  spec.id = f.string("id");
  try {
    spec.level = parse_level(f.string("level"));
  } catch (const Error& e) {
    malformed("spec.level", e.what());
  }
  const Json& steps = f.at("target_steps");
  if (!steps.is_array()) malformed("spec.target_steps", "expected an array");
  for (const auto& s : steps) spec.target_steps.push_back(step_from_json(s));

  const Json& controls = f.at("allowed_controls");
  if (!controls.is_array()) malformed("spec.allowed_controls", "expected an array");
  for (const auto& c : controls) {
    if (!c.is_string()) malformed("spec.allowed_controls", "entries must be strings");
    try {
      spec.allowed_controls.insert(parse_control(c.get<std::string>()));
    } catch (const Error& e) {
      malformed("spec.allowed_controls", e.what());
    }
  }

  const Fields tol(f.at("tolerance"), "spec.tolerance");
  tol.only({"translation", "rotation_deg", "scale_log"});
  spec.tolerance = {tol.number("translation"), tol.number("rotation_deg"), tol.number("scale_log")};
  const Fields w(f.at("weights"), "spec.weights");
  w.only({"translation", "rotation", "scale"});
  spec.weights = {w.number("translation"), w.number("rotation"), w.number("scale")};

  spec.seed = f.unsigned_integer("seed");
  spec.model_ref = f.string("model_ref");
  if (f.has("lock_physical_after_virtual")) spec.lock_physical_after_virtual = f.boolean("lock_physical_after_virtual");
  return spec;
}

Json to_json(const BrickModel& model) {
  Json bricks = Json::array();
  for (const auto& b : model.bricks)
    bricks.push_back({{"min_corner", to_json(b.min_corner)}, {"size", to_json(b.size)}, {"color", rgb_to_json(b.color)}});
  return Json{{"id", model.id}, {"bricks", bricks}};
}

BrickModel model_from_json(const Json& j) {
  const Fields f(j, "model");
  f.only({"id", "bricks"});
  BrickModel model;
  model.id = f.string("id");
  const Json& bricks = f.at("bricks");
  if (!bricks.is_array()) malformed("model.bricks", "expected an array");
  for (const auto& b : bricks) {
    const Fields bf(b, "model.bricks[]");
    bf.only({"min_corner", "size", "color"});
    model.bricks.push_back({vec3_from_json(bf.at("min_corner"), "brick.min_corner"),
                            vec3_from_json(bf.at("size"), "brick.size"), rgb_from_json(bf.at("color"), "brick.color")});
  }
  return model;
}

const char* actor_name(Actor actor) { return actor == Actor::Physical ? "physical" : "virtual"; }

Actor parse_actor(std::string_view name) {
  if (name == "physical") return Actor::Physical;
  if (name == "virtual") return Actor::Virtual;
  malformed("event.actor", "actor must be physical or virtual");
}

Status parse_status(std::string_view name) {
  if (name == "playing") return Status::Playing;
  if (name == "solved") return Status::Solved;
  malformed("status", "status must be playing or solved");
}

Json to_json(const MoveAction& action) {
  return std::visit(Overloaded{
                        [](const ApplyStep& a) { return Json{{"kind", "apply_step"}, {"step", to_json(a.step)}}; },
                        [](const EditLastStepParam& e) {
                          return Json{{"kind", "edit_param"}, {"field", param_field_name(e.field)}, {"value", e.value}};
                        },
                        [](const Undo&) { return Json{{"kind", "undo"}}; },
                        [](const Reset&) { return Json{{"kind", "reset"}}; },
                    },
                    action);
}

MoveAction action_from_json(const Json& j) {
  const Fields f(j, "action");
  const std::string kind = f.string("kind");
  if (kind == "apply_step") {
    f.only({"kind", "step"});
    return ApplyStep{step_from_json(f.at("step"))};
  }
  if (kind == "edit_param") {
    f.only({"kind", "field", "value"});
    ParamField field;
    try {
      field = parse_param_field(f.string("field"));
    } catch (const Error& e) {
      malformed("action.field", e.what());
    }
    return EditLastStepParam{field, f.number("value")};
  }
  if (kind == "undo") {
    f.only({"kind"});
    return Undo{};
  }
  if (kind == "reset") {
    f.only({"kind"});
    return Reset{};
  }
  malformed("action", "unknown kind '" + kind + "'");
}

Json to_json(const MoveEvent& event) {
  return Json{{"seq", event.sequence_no},
              {"actor", actor_name(event.actor)},
              {"t_ms", event.timestamp_ms},
              {"action", to_json(event.action)}};
}

MoveEvent event_from_json(const Json& j) {
  const Fields f(j, "event");
  MoveEvent e;
  e.sequence_no = f.integer("seq");
  e.actor = parse_actor(f.string("actor"));
  e.timestamp_ms = f.integer("t_ms");
  e.action = action_from_json(f.at("action"));
  return e;
}

}  // namespace xformplay::io
