#include "xformplay/scene_annot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "xformplay/error.hpp"

namespace xformplay {

namespace {

std::array<Vec3, 8> brick_corners(const Brick& b) {
  std::array<Vec3, 8> c;
  for (int i = 0; i < 8; ++i) {
    c[i] = {b.min_corner.x + ((i & 1) ? b.size.x : 0.0), b.min_corner.y + ((i & 2) ? b.size.y : 0.0),
            b.min_corner.z + ((i & 4) ? b.size.z : 0.0)};
  }
  return c;
}

// Corner index pairs; corner bit 0 = +x, bit 1 = +y, bit 2 = +z.
constexpr std::array<std::pair<int, int>, 12> kEdges{{
    {0, 1}, {2, 3}, {4, 5}, {6, 7},  // along x
    {0, 2}, {1, 3}, {4, 6}, {5, 7},  // along y
    {0, 4}, {1, 5}, {2, 6}, {3, 7},  // along z
}};

std::pair<Vec3, Vec3> bounding_box(const BrickModel& model) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vec3 lo{inf, inf, inf};
  Vec3 hi{-inf, -inf, -inf};
  for (const auto& b : model.bricks) {
    const Vec3 top = b.min_corner + b.size;
    lo = {std::min(lo.x, b.min_corner.x), std::min(lo.y, b.min_corner.y), std::min(lo.z, b.min_corner.z)};
    hi = {std::max(hi.x, top.x), std::max(hi.y, top.y), std::max(hi.z, top.z)};
  }
  return {lo, hi};
}

Mat4 rigid_part(const Mat4& m) {
  const PoseDecomposition d = decompose_trs(m);
  return translation_matrix(d.translation) * d.rotation;
}

std::optional<Axis> rotation_axis_of(Control c) {
  switch (c) {
    case Control::RotateX: return Axis::X;
    case Control::RotateY: return Axis::Y;
    case Control::RotateZ: return Axis::Z;
    default: return std::nullopt;
  }
}

}  // namespace

void validate_model(const BrickModel& model) {
  if (model.bricks.empty()) throw Error(ErrorCode::InvalidParameter, "brick model has no bricks");
  for (const auto& b : model.bricks) {
    if (!b.min_corner.is_finite()) throw Error(ErrorCode::InvalidParameter, "brick corner must be finite");
    for (int i = 0; i < 3; ++i) {
      const double s = b.size[i];
      if (!std::isfinite(s) || s <= 0.0 || s != std::floor(s))
        throw Error(ErrorCode::InvalidParameter, "brick sizes must be positive whole numbers");
    }
  }
}

BrickModel default_brick_model() {
  return BrickModel{kDefaultModelId,
                    {
                        {{-2, -1, 0}, {4, 2, 1}, {200, 30, 30}},
                        {{-2, -1, 1}, {2, 2, 1}, {240, 200, 20}},
                        {{-1, -1, 2}, {2, 2, 1}, {30, 90, 200}},
                    }};
}

std::vector<Segment> wireframe_edges(const BrickModel& model) {
  std::vector<Segment> out;
  out.reserve(model.bricks.size() * kEdges.size());
  for (const auto& b : model.bricks) {
    const auto c = brick_corners(b);
    for (const auto& [a, z] : kEdges) out.push_back({c[a], c[z]});
  }
  return out;
}

MappedPoints mapped_points(const BrickModel& model, const Mat4& m, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "need at least one mapped point");
  validate_model(model);

  std::vector<Vec3> corners;
  for (const auto& b : model.bricks)
    for (const auto& c : brick_corners(b)) corners.push_back(c);
  auto key = [](const Vec3& v) { return std::tuple(v.x, v.y, v.z); };
  std::sort(corners.begin(), corners.end(), [&](const Vec3& a, const Vec3& b) { return key(a) < key(b); });
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());

  const auto [lo, hi] = bounding_box(model);
  const Vec3 centre = (lo + hi) * 0.5;
  std::stable_sort(corners.begin(), corners.end(), [&](const Vec3& a, const Vec3& b) {
    const Vec3 da = a - centre;
    const Vec3 db = b - centre;
    return da.dot(da) > db.dot(db);
  });

  MappedPoints out;
  const auto count = std::min(corners.size(), static_cast<std::size_t>(n));
  out.clamped = count < static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < count; ++i)
    out.pairs.push_back({corners[i], apply_point(m, corners[i]), static_cast<int>(i)});
  return out;
}

const char* frame_role_name(FrameRole role) {
  switch (role) {
    case FrameRole::World: return "world";
    case FrameRole::PreImage: return "pre_image";
    case FrameRole::Image: return "image";
    case FrameRole::Virtual: return "virtual";
  }
  return "?";
}

double arc_radius(const BrickModel& model) {
  const auto [lo, hi] = bounding_box(model);
  return 0.5 * ((hi - lo).norm() / 2.0);
}

AnnotationSet build_annotations(const GameState& state, const BrickModel& model, const AnnotationOptions& options) {
  validate_model(model);
  AnnotationSet out;

  const Mat4 image = rigid_part(state.physical_matrix);
  const Mat4 virt = rigid_part(state.virtual_matrix);
  out.frames = {
      {{0, 0, 0}, Mat4::identity(), FrameRole::World},
      {{0, 0, 0}, Mat4::identity(), FrameRole::PreImage},
      {image.translation(), image, FrameRole::Image},
      {virt.translation(), virt, FrameRole::Virtual},
  };
  if (state.spec.level == Level::Motion) return out;

  const bool against_virtual = options.reference == AnnotationReference::Virtual;
  const Mat4 map = against_virtual ? alignment_delta(state.virtual_matrix, state.physical_matrix) : state.physical_matrix;
  const Vec3 from = against_virtual ? state.virtual_matrix.translation() : Vec3{0, 0, 0};
  const Vec3 to = state.physical_matrix.translation();

  const double distance = (to - from).norm();
  if (distance > 0.0) out.annotations.emplace_back(DimensionLine{from, to, distance});

  const PoseDecomposition d = decompose_trs(map);
  const double radius = arc_radius(model);
  for (const AxisRotation& f : axis_rotation_factors(d.rotation))
    out.annotations.emplace_back(RotationArc{to, f.axis, radius, Angle::degrees(0.0), f.angle, f.angle});

  if (options.active_control) {
    if (auto axis = rotation_axis_of(*options.active_control))
      out.annotations.emplace_back(AxisHighlight{*axis, *axis});
  }

  if (!(map == Mat4::identity())) {
    for (const auto& pair : mapped_points(model, map, options.mapped_point_count).pairs)
      out.annotations.emplace_back(pair);
  }
  return out;
}

const char* cell_region_name(CellRegion region) {
  switch (region) {
    case CellRegion::RotationScaleRegion: return "rotation_scale";
    case CellRegion::TranslationRegion: return "translation";
    case CellRegion::BottomRow: return "bottom_row";
  }
  return "?";
}

const char* panel_theme_name(PanelTheme theme) {
  return theme == PanelTheme::Physical ? "physical" : "virtual_green";
}

CellRegion region_of(int row, int col) {
  if (row == 3) return CellRegion::BottomRow;
  return col == 3 ? CellRegion::TranslationRegion : CellRegion::RotationScaleRegion;
}

namespace {

PanelRow panel_row(const Mat4& m, PanelTheme theme) {
  PanelRow row;
  row.theme = theme;
  for (int i = 0; i < 16; ++i) {
    row.cells[i] = m.cells()[i];
    row.highlight[i] = region_of(i / 4, i % 4);
  }
  return row;
}

MulExpansion last_step_expansion(const std::vector<TransformStep>& steps) {
  const std::span<const TransformStep> prior(steps.data(), steps.size() - 1);
  return multiply_expansion(step_matrix(steps.back()), compose(prior));
}

}  // namespace

MatrixPanel matrix_panel(const GameState& state) {
  MatrixPanel panel;
  panel.rows = {panel_row(state.physical_matrix, PanelTheme::Physical),
                panel_row(state.virtual_matrix, PanelTheme::VirtualGreen)};
  if (state.event_log.empty()) return panel;

  const MoveEvent& last = state.event_log.back();
  const bool composed = std::holds_alternative<ApplyStep>(last.action) ||
                        std::holds_alternative<EditLastStepParam>(last.action);
  if (!composed) return panel;
  if (last.actor == Actor::Physical && !state.physical_steps.empty()) {
    panel.expansion = PanelExpansion{1, last_step_expansion(state.physical_steps)};
  } else if (last.actor == Actor::Virtual && !state.virtual_steps.empty()) {
    panel.expansion = PanelExpansion{2, last_step_expansion(state.virtual_steps)};
  }
  return panel;
}

}  // namespace xformplay
