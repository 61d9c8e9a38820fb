#pragma once

// The transformation puzzle: a "physical" model moved freely, a virtual
// wireframe the player re-poses one parameterised step at a time, and the
// win check between the two.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xformplay/pose_solver.hpp"
#include "xformplay/xform_core.hpp"

namespace xformplay {

inline constexpr const char* kEngineVersion = "1.0.0";

// Motion < Mapping < Function; each level adds features to the previous one.
enum class Level { Motion, Mapping, Function };

enum class Control { TranslateX, TranslateY, TranslateZ, RotateX, RotateY, RotateZ, Scale };

using ControlSet = std::set<Control>;

const char* level_name(Level level);
Level parse_level(std::string_view name);
const char* control_name(Control control);
Control parse_control(std::string_view name);
ControlSet all_controls();

// Controls a step needs: one per nonzero translation component, the
// rotation's axis, or scale.
ControlSet controls_for(const TransformStep& step);

struct PuzzleSpec {
  std::string id;
  Level level = Level::Function;
  std::vector<TransformStep> target_steps;
  ControlSet allowed_controls;
  PoseTolerance tolerance;
  PoseWeights weights;
  std::uint64_t seed = 0;
  std::string model_ref;
  // Reject physical moves once the first virtual step exists.
  bool lock_physical_after_virtual = false;

  friend bool operator==(const PuzzleSpec&, const PuzzleSpec&) = default;
};

// Throws Error(InvalidSpec) when the target is not a pure TRS map or the
// allowed controls cannot reproduce its factors.
void validate_spec(const PuzzleSpec& spec);

enum class Actor { Physical, Virtual };
enum class ParamField { X, Y, Z, Angle, Factor };

const char* param_field_name(ParamField field);
ParamField parse_param_field(std::string_view name);

struct ApplyStep {
  TransformStep step;
  friend bool operator==(const ApplyStep&, const ApplyStep&) = default;
};
struct EditLastStepParam {
  ParamField field = ParamField::X;
  double value = 0.0;
  friend bool operator==(const EditLastStepParam&, const EditLastStepParam&) = default;
};
struct Undo {
  friend bool operator==(const Undo&, const Undo&) = default;
};
struct Reset {
  friend bool operator==(const Reset&, const Reset&) = default;
};

using MoveAction = std::variant<ApplyStep, EditLastStepParam, Undo, Reset>;

struct MoveEvent {
  std::int64_t sequence_no = 0;
  Actor actor = Actor::Virtual;
  MoveAction action;
  std::int64_t timestamp_ms = 0;
  friend bool operator==(const MoveEvent&, const MoveEvent&) = default;
};

enum class Status { Playing, Solved };
const char* status_name(Status status);

struct GameState {
  PuzzleSpec spec;
  std::vector<TransformStep> physical_steps;  // since the last reset
  Mat4 physical_matrix;
  std::vector<TransformStep> virtual_steps;
  Mat4 virtual_matrix;
  Status status = Status::Playing;
  std::int64_t move_count = 0;
  std::int64_t physical_moves = 0;  // since the last reset; winning needs one
  std::vector<MoveEvent> event_log;

  std::int64_t next_sequence_no() const { return static_cast<std::int64_t>(event_log.size()) + 1; }

  friend bool operator==(const GameState&, const GameState&) = default;
};

GameState new_session(PuzzleSpec spec);

// Every transition takes the state by value and returns the successor.
// `at_ms` is the event timestamp in milliseconds since session start.
GameState apply_physical(GameState state, const TransformStep& step, std::int64_t at_ms = 0);
GameState apply_virtual(GameState state, const TransformStep& step, std::int64_t at_ms = 0);
GameState edit_virtual_param(GameState state, ParamField field, double value, std::int64_t at_ms = 0);
GameState undo(GameState state, std::int64_t at_ms = 0);
GameState reset(GameState state, std::int64_t at_ms = 0);

// Dispatches one logged event; its sequence number must be the next one.
GameState apply_event(GameState state, const MoveEvent& event);

// Folds a log from a fresh session. Errors carry the failing sequence_no.
GameState replay(const PuzzleSpec& spec, std::span<const MoveEvent> events);

// Hint for the current virtual pose using the puzzle's weights and tolerance.
std::optional<Hint> session_hint(const GameState& state);

inline constexpr int kMinDifficulty = 1;
inline constexpr int kMaxDifficulty = 5;
inline constexpr const char* kDefaultModelId = "starter-house";

PuzzleSpec generate_puzzle(std::uint64_t seed, Level level, int difficulty);

}  // namespace xformplay
