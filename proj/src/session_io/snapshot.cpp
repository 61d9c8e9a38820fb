#include "xformplay/session_io/snapshot.hpp"

#include "xformplay/session_io/puzzle_file.hpp"

namespace xformplay::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json annotation_json(const Annotation& a) {
  return std::visit(Overloaded{
                        [](const DimensionLine& d) {
                          return Json{{"kind", "dimension_line"},
                                      {"from", to_json(d.from)},
                                      {"to", to_json(d.to)},
                                      {"label", d.label}};
                        },
                        [](const RotationArc& r) {
                          return Json{{"kind", "rotation_arc"},
                                      {"center", to_json(r.center)},
                                      {"axis", axis_name(r.axis)},
                                      {"radius", r.radius},
                                      {"start_angle_deg", r.start_angle.deg()},
                                      {"sweep_deg", r.sweep.deg()},
                                      {"label_deg", r.label.deg()}};
                        },
                        [](const AxisHighlight& h) {
                          return Json{{"kind", "axis_highlight"},
                                      {"axis", axis_name(h.axis)},
                                      {"plane_normal", axis_name(h.plane_normal)}};
                        },
                        [](const MappedPointPair& p) {
                          return Json{{"kind", "mapped_point"},
                                      {"index", p.index},
                                      {"pre", to_json(p.pre)},
                                      {"img", to_json(p.img)}};
                        },
                    },
                    a);
}

Json expansion_json(const PanelExpansion& pe) {
  Json cells = Json::array();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const ExpansionCell& c = pe.expansion.cell(i, j);
      Json terms = Json::array();
      for (const auto& t : c.terms) terms.push_back(Json::array({t.left, t.right, t.product}));
      cells.push_back({{"row", i + 1}, {"col", j + 1}, {"terms", terms}, {"sum", c.sum}});
    }
  }
  return Json{{"row", pe.row},
              {"left", to_json(pe.expansion.left)},
              {"right", to_json(pe.expansion.right)},
              {"cells", cells}};
}

}  // namespace

LevelFeatures features_for(Level level) {
  LevelFeatures f;
  f.annotations = level != Level::Motion;
  f.mapped_points = level != Level::Motion;
  f.matrix_panel = level == Level::Function;
  f.parameter_controls = level == Level::Function;
  return f;
}

SceneSnapshot snapshot(const GameState& state, const BrickModel& model, const AnnotationOptions& options) {
  SceneSnapshot s;
  s.puzzle_id = state.spec.id;
  s.level = state.spec.level;
  s.features = features_for(s.level);
  s.status = state.status;
  s.move_count = state.move_count;
  s.last_sequence_no = static_cast<std::int64_t>(state.event_log.size());
  s.active_control = options.active_control;
  s.model_id = model.id;

  AnnotationSet set = build_annotations(state, model, options);
  s.frames = std::move(set.frames);
  s.annotations = std::move(set.annotations);
  s.wireframe = wireframe_edges(model);
  s.solid_pose = state.physical_matrix;
  s.virtual_pose = state.virtual_matrix;
  s.virtual_steps = state.virtual_steps;
  if (s.features.matrix_panel) s.panel = matrix_panel(state);
  s.error = pose_error(state.virtual_matrix, state.physical_matrix, state.spec.weights);
  s.aligned = is_aligned(state.virtual_matrix, state.physical_matrix, state.spec.tolerance);
  return s;
}

Json to_json(const MatrixPanel& panel) {
  Json rows = Json::array();
  for (const auto& row : panel.rows) {
    Json cells = Json::array();
    Json highlight = Json::array();
    for (int i = 0; i < 16; ++i) {
      cells.push_back(row.cells[i]);
      highlight.push_back(cell_region_name(row.highlight[i]));
    }
    rows.push_back({{"theme", panel_theme_name(row.theme)}, {"cells", cells}, {"highlight", highlight}});
  }
  return Json{{"rows", rows}, {"expansion", panel.expansion ? expansion_json(*panel.expansion) : Json(nullptr)}};
}

Json to_json(const SceneSnapshot& s) {
  Json frames = Json::array();
  for (const auto& f : s.frames)
    frames.push_back({{"role", frame_role_name(f.role)}, {"origin", to_json(f.origin)}, {"basis", to_json(f.basis)}});
  Json edges = Json::array();
  for (const auto& e : s.wireframe) edges.push_back(Json::array({to_json(e.from), to_json(e.to)}));
  Json steps = Json::array();
  for (const auto& st : s.virtual_steps) steps.push_back(to_json(st));
  Json annotations = Json::array();
  for (const auto& a : s.annotations) annotations.push_back(annotation_json(a));

  return Json{
      {"format_version", kFormatVersion},
      {"engine_version", kEngineVersion},
      {"puzzle_id", s.puzzle_id},
      {"level", level_name(s.level)},
      {"features",
       {{"annotations", s.features.annotations},
        {"mapped_points", s.features.mapped_points},
        {"matrix_panel", s.features.matrix_panel},
        {"parameter_controls", s.features.parameter_controls}}},
      {"status", status_name(s.status)},
      {"move_count", s.move_count},
      {"last_sequence_no", s.last_sequence_no},
      {"active_control", s.active_control ? Json(control_name(*s.active_control)) : Json(nullptr)},
      {"frames", frames},
      {"wireframe", {{"model_id", s.model_id}, {"pose", to_json(Mat4::identity())}, {"edges", edges}}},
      {"solid_model", {{"model_id", s.model_id}, {"pose", to_json(s.solid_pose)}}},
      {"virtual_model", {{"pose", to_json(s.virtual_pose)}, {"steps", steps}}},
      {"annotations", annotations},
      {"panel", s.panel ? to_json(*s.panel) : Json(nullptr)},
      {"error",
       {{"translation", s.error.translation},
        {"rotation_deg", s.error.rotation},
        {"scale_log", s.error.scale},
        {"total", s.error.total},
        {"aligned", s.aligned}}},
  };
}

std::string snapshot_text(const SceneSnapshot& snap) { return to_json(snap).dump(); }

void save_snapshot(const std::filesystem::path& path, const SceneSnapshot& snap) {
  write_text_file(path, to_json(snap).dump(2) + "\n");
}

}  // namespace xformplay::io
