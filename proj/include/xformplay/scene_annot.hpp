#pragma once

// Display model: brick geometry, coordinate frames, tracking graphics and
// the two-row matrix panel. Everything here is plain data for a renderer.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "xformplay/puzzle_engine.hpp"
#include "xformplay/xform_core.hpp"

namespace xformplay {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Axis-aligned box in stud units; sizes are positive whole numbers.
struct Brick {
  Vec3 min_corner;
  Vec3 size{1, 1, 1};
  Rgb color;
  friend bool operator==(const Brick&, const Brick&) = default;
};

struct BrickModel {
  std::string id;
  std::vector<Brick> bricks;
  friend bool operator==(const BrickModel&, const BrickModel&) = default;
};

// Throws Error(InvalidParameter) for an empty model or bad brick sizes.
void validate_model(const BrickModel& model);

// Small stepped house centred on the origin; id kDefaultModelId.
BrickModel default_brick_model();

struct Segment {
  Vec3 from;
  Vec3 to;
};

// 12 edges per brick: brick order, then edges 0-3 along x, 4-7 along y,
// 8-11 along z.
std::vector<Segment> wireframe_edges(const BrickModel& model);

struct MappedPointPair {
  Vec3 pre;
  Vec3 img;
  int index = 0;
};

struct MappedPoints {
  std::vector<MappedPointPair> pairs;
  bool clamped = false;  // fewer distinct corners than requested
};

inline constexpr int kDefaultMappedPoints = 8;

// Distinct brick corners, farthest from the model's bounding-box centre
// first (ties by x, y, z), each paired with its image under m.
MappedPoints mapped_points(const BrickModel& model, const Mat4& m, int n = kDefaultMappedPoints);

enum class FrameRole { World, PreImage, Image, Virtual };
const char* frame_role_name(FrameRole role);

struct FrameTriad {
  Vec3 origin;
  Mat4 basis;  // rotation and translation only
  FrameRole role = FrameRole::World;
};

struct DimensionLine {
  Vec3 from;
  Vec3 to;
  double label = 0.0;  // |to - from|
};

struct RotationArc {
  Vec3 center;
  Axis axis = Axis::Z;
  double radius = 0.0;
  Angle start_angle;
  Angle sweep;  // signed, counterclockwise positive
  Angle label;
};

struct AxisHighlight {
  Axis axis = Axis::Z;
  Axis plane_normal = Axis::Z;
};

using Annotation = std::variant<DimensionLine, RotationArc, AxisHighlight, MappedPointPair>;

enum class AnnotationReference {
  PreImage,  // physical model against its starting pose
  Virtual,   // physical model against the current virtual pose
};

struct AnnotationOptions {
  std::optional<Control> active_control;
  AnnotationReference reference = AnnotationReference::PreImage;
  int mapped_point_count = kDefaultMappedPoints;
};

struct AnnotationSet {
  std::vector<Annotation> annotations;
  std::vector<FrameTriad> frames;  // World, PreImage, Image, Virtual
};

// Arc radius: half the bounding-sphere radius of the model.
double arc_radius(const BrickModel& model);

// Frames always; tracking graphics from the mapping level upwards.
AnnotationSet build_annotations(const GameState& state, const BrickModel& model, const AnnotationOptions& options = {});

enum class CellRegion { RotationScaleRegion, TranslationRegion, BottomRow };
enum class PanelTheme { Physical, VirtualGreen };

const char* cell_region_name(CellRegion region);
const char* panel_theme_name(PanelTheme theme);

struct PanelRow {
  std::array<double, 16> cells{};
  std::array<CellRegion, 16> highlight{};
  PanelTheme theme = PanelTheme::Physical;
};

struct PanelExpansion {
  int row = 1;  // 1 = physical, 2 = virtual
  MulExpansion expansion;
};

struct MatrixPanel {
  std::array<PanelRow, 2> rows;
  std::optional<PanelExpansion> expansion;
};

CellRegion region_of(int row, int col);

// Row 1 mirrors the physical matrix, row 2 the virtual one. The expansion
// shows step * previous when the last logged event composed a matrix.
MatrixPanel matrix_panel(const GameState& state);

}  // namespace xformplay
