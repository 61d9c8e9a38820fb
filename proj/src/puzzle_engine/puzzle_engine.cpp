#include "xformplay/puzzle_engine.hpp"

#include <algorithm>
#include <cmath>

#include "xformplay/error.hpp"

namespace xformplay {

namespace {

constexpr double kFactorEps = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Control translate_control(int component) {
  return component == 0 ? Control::TranslateX : (component == 1 ? Control::TranslateY : Control::TranslateZ);
}

Control rotate_control(Axis axis) {
  switch (axis) {
    case Axis::X: return Control::RotateX;
    case Axis::Y: return Control::RotateY;
    case Axis::Z: return Control::RotateZ;
  }
  return Control::RotateZ;
}

bool subset_of(const ControlSet& needed, const ControlSet& allowed) {
  return std::includes(allowed.begin(), allowed.end(), needed.begin(), needed.end());
}

std::string controls_text(const ControlSet& set) {
  std::string out;
  for (Control c : set) {
    if (!out.empty()) out += ", ";
    out += control_name(c);
  }
  return out;
}

void require_playing(const GameState& state) {
  if (state.status == Status::Solved)
    throw Error(ErrorCode::SessionFinished, "puzzle already solved; reset to play again");
}

void require_virtual_level(const GameState& state) {
  if (state.spec.level == Level::Motion)
    throw Error(ErrorCode::IllegalMove, "the motion level only allows physical moves");
}

void require_allowed(const GameState& state, const TransformStep& step) {
  const ControlSet needed = controls_for(step);
  if (!subset_of(needed, state.spec.allowed_controls))
    throw Error(ErrorCode::IllegalMove, "step '" + describe(step) + "' needs controls not allowed in this puzzle");
}

void log_event(GameState& state, Actor actor, MoveAction action, std::int64_t at_ms) {
  state.event_log.push_back({state.next_sequence_no(), actor, std::move(action), at_ms});
}

void refresh_status(GameState& state) {
  const bool solved =
      state.physical_moves > 0 && is_aligned(state.virtual_matrix, state.physical_matrix, state.spec.tolerance);
  state.status = solved ? Status::Solved : Status::Playing;
}

}  // namespace

const char* level_name(Level level) {
  switch (level) {
    case Level::Motion: return "motion";
    case Level::Mapping: return "mapping";
    case Level::Function: return "function";
  }
  return "?";
}

Level parse_level(std::string_view name) {
  for (Level l : {Level::Motion, Level::Mapping, Level::Function})
    if (name == level_name(l)) return l;
  throw Error(ErrorCode::InvalidParameter, "unknown level '" + std::string(name) + "'");
}

const char* control_name(Control control) {
  switch (control) {
    case Control::TranslateX: return "translate_x";
    case Control::TranslateY: return "translate_y";
    case Control::TranslateZ: return "translate_z";
    case Control::RotateX: return "rotate_x";
    case Control::RotateY: return "rotate_y";
    case Control::RotateZ: return "rotate_z";
    case Control::Scale: return "scale";
  }
  return "?";
}

Control parse_control(std::string_view name) {
  for (Control c : all_controls())
    if (name == control_name(c)) return c;
  throw Error(ErrorCode::InvalidParameter, "unknown control '" + std::string(name) + "'");
}

ControlSet all_controls() {
  return {Control::TranslateX, Control::TranslateY, Control::TranslateZ, Control::RotateX,
          Control::RotateY,    Control::RotateZ,    Control::Scale};
}

ControlSet controls_for(const TransformStep& step) {
  return std::visit(Overloaded{
                        [](const Translate& t) {
                          ControlSet s;
                          for (int i = 0; i < 3; ++i)
                            if (t.offset[i] != 0.0) s.insert(translate_control(i));
                          return s;
                        },
                        [](const Rotate& r) { return ControlSet{rotate_control(r.axis)}; },
                        [](const Scale&) { return ControlSet{Control::Scale}; },
                    },
                    step);
}

const char* param_field_name(ParamField field) {
  switch (field) {
    case ParamField::X: return "x";
    case ParamField::Y: return "y";
    case ParamField::Z: return "z";
    case ParamField::Angle: return "angle";
    case ParamField::Factor: return "factor";
  }
  return "?";
}

ParamField parse_param_field(std::string_view name) {
  for (ParamField f : {ParamField::X, ParamField::Y, ParamField::Z, ParamField::Angle, ParamField::Factor})
    if (name == param_field_name(f)) return f;
  throw Error(ErrorCode::InvalidField, "unknown parameter field '" + std::string(name) + "'");
}

const char* status_name(Status status) { return status == Status::Solved ? "solved" : "playing"; }

void validate_spec(const PuzzleSpec& spec) {
  if (spec.id.empty()) throw Error(ErrorCode::InvalidSpec, "puzzle id is empty");
  if (spec.target_steps.empty()) throw Error(ErrorCode::InvalidSpec, "puzzle has no target steps");
  try {
    validate_weights(spec.weights);
    validate_tolerance(spec.tolerance);
    for (const auto& step : spec.target_steps) validate_step(step);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
  if (spec.level != Level::Function) {
    for (const auto& step : spec.target_steps)
      if (std::holds_alternative<Scale>(step))
        throw Error(ErrorCode::InvalidSpec, "target scales the physical model, which only the function level allows");
  }

  PoseDecomposition target;
  try {
    target = decompose_trs(compose(spec.target_steps));
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("target is not a pure TRS map: ") + e.what());
  }

  ControlSet needed;
  for (int i = 0; i < 3; ++i)
    if (std::abs(target.translation[i]) > kFactorEps) needed.insert(translate_control(i));
  for (const auto& f : axis_rotation_factors(target.rotation)) needed.insert(rotate_control(f.axis));
  if (std::abs(std::log(target.scale)) > kFactorEps) needed.insert(Control::Scale);
  if (!subset_of(needed, spec.allowed_controls))
    throw Error(ErrorCode::InvalidSpec,
                "allowed controls cannot solve the target; it needs: " + controls_text(needed));
}

GameState new_session(PuzzleSpec spec) {
  validate_spec(spec);
  GameState state;
  state.spec = std::move(spec);
  return state;
}

GameState apply_physical(GameState state, const TransformStep& step, std::int64_t at_ms) {
  require_playing(state);
  validate_step(step);
  if (std::holds_alternative<Scale>(step) && state.spec.level != Level::Function)
    throw Error(ErrorCode::IllegalMove, "a hand-held model cannot be scaled below the function level");
  if (state.spec.lock_physical_after_virtual && !state.virtual_steps.empty())
    throw Error(ErrorCode::IllegalMove, "the physical model is locked once virtual steps exist");

  state.physical_steps.push_back(step);
  state.physical_matrix = step_matrix(step) * state.physical_matrix;
  ++state.physical_moves;
  log_event(state, Actor::Physical, ApplyStep{step}, at_ms);
  refresh_status(state);
  return state;
}

GameState apply_virtual(GameState state, const TransformStep& step, std::int64_t at_ms) {
  require_playing(state);
  require_virtual_level(state);
  validate_step(step);
  require_allowed(state, step);

  state.virtual_steps.push_back(step);
  state.virtual_matrix = step_matrix(step) * state.virtual_matrix;
  ++state.move_count;
  log_event(state, Actor::Virtual, ApplyStep{step}, at_ms);
  refresh_status(state);
  return state;
}

GameState edit_virtual_param(GameState state, ParamField field, double value, std::int64_t at_ms) {
  require_playing(state);
  require_virtual_level(state);
  if (state.spec.level == Level::Mapping)
    throw Error(ErrorCode::IllegalMove, "parameter sliders belong to the function level");
  if (state.virtual_steps.empty()) throw Error(ErrorCode::NoActiveStep, "no virtual step to edit");

  TransformStep edited = state.virtual_steps.back();
  const bool matches = std::visit(Overloaded{
                                      [&](Translate& t) {
                                        if (field == ParamField::X) t.offset.x = value;
                                        else if (field == ParamField::Y) t.offset.y = value;
                                        else if (field == ParamField::Z) t.offset.z = value;
                                        else return false;
                                        return true;
                                      },
                                      [&](Rotate& r) {
                                        if (field != ParamField::Angle) return false;
                                        r.angle = Angle::degrees(value);
                                        return true;
                                      },
                                      [&](Scale& s) {
                                        if (field != ParamField::Factor) return false;
                                        s.factor = value;
                                        return true;
                                      },
                                  },
                                  edited);
  if (!matches)
    throw Error(ErrorCode::InvalidField, std::string("field '") + param_field_name(field) +
                                             "' does not belong to step '" + describe(state.virtual_steps.back()) +
                                             "'");
  validate_step(edited);
  require_allowed(state, edited);

  state.virtual_steps.back() = edited;
  state.virtual_matrix = compose(state.virtual_steps);
  log_event(state, Actor::Virtual, EditLastStepParam{field, value}, at_ms);
  refresh_status(state);
  return state;
}

GameState undo(GameState state, std::int64_t at_ms) {
  require_playing(state);
  require_virtual_level(state);
  if (state.virtual_steps.empty()) throw Error(ErrorCode::NothingToUndo, "no virtual step to undo");
  state.virtual_steps.pop_back();
  state.virtual_matrix = compose(state.virtual_steps);
  log_event(state, Actor::Virtual, Undo{}, at_ms);
  refresh_status(state);
  return state;
}

GameState reset(GameState state, std::int64_t at_ms) {
  state.physical_steps.clear();
  state.physical_matrix = Mat4::identity();
  state.virtual_steps.clear();
  state.virtual_matrix = Mat4::identity();
  state.physical_moves = 0;
  state.status = Status::Playing;
  log_event(state, Actor::Physical, Reset{}, at_ms);
  return state;
}

GameState apply_event(GameState state, const MoveEvent& event) {
  if (event.sequence_no != state.next_sequence_no())
    throw Error(ErrorCode::CorruptLog, "expected sequence_no " + std::to_string(state.next_sequence_no()) + ", got " +
                                           std::to_string(event.sequence_no));
  const auto wrong_actor = [&](const char* what) {
    return Error(ErrorCode::CorruptLog, std::string(what) + " logged with the wrong actor");
  };
  return std::visit(Overloaded{
                        [&](const ApplyStep& a) {
                          return event.actor == Actor::Physical
                                     ? apply_physical(std::move(state), a.step, event.timestamp_ms)
                                     : apply_virtual(std::move(state), a.step, event.timestamp_ms);
                        },
                        [&](const EditLastStepParam& e) {
                          if (event.actor != Actor::Virtual) throw wrong_actor("edit");
                          return edit_virtual_param(std::move(state), e.field, e.value, event.timestamp_ms);
                        },
                        [&](const Undo&) {
                          if (event.actor != Actor::Virtual) throw wrong_actor("undo");
                          return undo(std::move(state), event.timestamp_ms);
                        },
                        [&](const Reset&) {
                          if (event.actor != Actor::Physical) throw wrong_actor("reset");
                          return reset(std::move(state), event.timestamp_ms);
                        },
                    },
                    event.action);
}

GameState replay(const PuzzleSpec& spec, std::span<const MoveEvent> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto expected = static_cast<std::int64_t>(i) + 1;
    if (events[i].sequence_no != expected) {
      Error err(ErrorCode::CorruptLog, "sequence gap: expected " + std::to_string(expected) + ", found " +
                                           std::to_string(events[i].sequence_no));
      throw err.with_sequence_no(events[i].sequence_no).with_line(expected);
    }
  }
  GameState state = new_session(spec);
  for (const auto& event : events) {
    try {
      state = apply_event(std::move(state), event);
    } catch (const Error& e) {
      Error err(e.code(), "replay halted at sequence_no " + std::to_string(event.sequence_no) + ": " + e.what());
      throw err.with_sequence_no(event.sequence_no);
    }
  }
  return state;
}

std::optional<Hint> session_hint(const GameState& state) {
  return suggest_hint(state.virtual_matrix, state.physical_matrix, state.spec.weights, state.spec.tolerance);
}

}  // namespace xformplay
