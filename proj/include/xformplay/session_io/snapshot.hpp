#pragma once

// Render-ready view of a session: everything a client draws, with no engine
// calls needed. Serialised with a fixed field order so equal states give
// equal bytes.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xformplay/puzzle_engine.hpp"
#include "xformplay/scene_annot.hpp"
#include "xformplay/session_io/codec.hpp"

namespace xformplay::io {

inline constexpr const char* kSnapshotExtension = ".snap.json";

struct LevelFeatures {
  bool annotations = false;
  bool mapped_points = false;
  bool matrix_panel = false;
  bool parameter_controls = false;
};

LevelFeatures features_for(Level level);

struct SceneSnapshot {
  std::string puzzle_id;
  Level level = Level::Function;
  LevelFeatures features;
  Status status = Status::Playing;
  std::int64_t move_count = 0;
  std::int64_t last_sequence_no = 0;
  std::optional<Control> active_control;
  std::string model_id;
  std::vector<FrameTriad> frames;
  std::vector<Segment> wireframe;  // pre-image pose, which is the world frame
  Mat4 solid_pose;                 // physical model
  Mat4 virtual_pose;
  std::vector<TransformStep> virtual_steps;
  std::vector<Annotation> annotations;
  std::optional<MatrixPanel> panel;  // function level only
  PoseError error;
  bool aligned = false;
};

SceneSnapshot snapshot(const GameState& state, const BrickModel& model, const AnnotationOptions& options = {});

Json to_json(const SceneSnapshot& snap);
Json to_json(const MatrixPanel& panel);
// Compact single-line JSON.
std::string snapshot_text(const SceneSnapshot& snap);
void save_snapshot(const std::filesystem::path& path, const SceneSnapshot& snap);

}  // namespace xformplay::io
