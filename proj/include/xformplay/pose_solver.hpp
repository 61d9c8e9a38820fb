#pragma once

// Inverse problems on top of xform_core: TRS factoring, pose error,
// alignment deltas, point-set registration and hints.

#include <optional>
#include <span>
#include <vector>

#include "xformplay/xform_core.hpp"

namespace xformplay {

struct AxisAngle {
  Vec3 axis{0, 0, 1};  // unit length
  Angle angle;         // [0, 180]
};

// m = translation_matrix(translation) * rotation * scale_matrix(scale)
struct PoseDecomposition {
  Vec3 translation;
  Mat4 rotation;
  AxisAngle axis_angle;
  double scale = 1.0;

  Mat4 recompose() const;
};

// Throws ReflectionOrSingular when det(upper 3x3) <= 0 and
// ShearOrNonuniformScale when the normalised block is not orthonormal.
PoseDecomposition decompose_trs(const Mat4& m);

// Axis-angle of a pure rotation. At angle 0 the axis is +z; at 180 degrees
// the first nonzero axis component is positive.
AxisAngle rotation_axis_angle(const Mat4& rotation);

// Geodesic angle in [0, 180] degrees. Throws InvalidRotation unless both
// blocks are orthonormal within 1e-6.
Angle rotation_angle_between(const Mat4& r1, const Mat4& r2);

struct AxisRotation {
  Axis axis = Axis::Z;
  Angle angle;  // signed, (-180, 180]
  friend bool operator==(const AxisRotation&, const AxisRotation&) = default;
};

// Splits a rotation into coordinate-axis turns in application order. A
// rotation about a coordinate axis yields a single signed turn; anything
// else yields the x, y, z Euler factors (R = Rz * Ry * Rx) with the
// smaller total sweep, identity factors dropped.
std::vector<AxisRotation> axis_rotation_factors(const Mat4& rotation);

struct PoseWeights {
  double translation = 1.0;  // per scene unit
  double rotation = 0.1;     // per degree
  double scale = 10.0;       // per log unit
  friend bool operator==(const PoseWeights&, const PoseWeights&) = default;
};

struct PoseTolerance {
  double translation = 0.25;  // scene units
  double rotation = 2.0;      // degrees
  double scale = 0.02;        // log units
  friend bool operator==(const PoseTolerance&, const PoseTolerance&) = default;
};

struct PoseError {
  double translation = 0.0;  // Euclidean, scene units
  double rotation = 0.0;     // geodesic, degrees
  double scale = 0.0;        // |ln s_a - ln s_b|
  double total = 0.0;
};

void validate_weights(const PoseWeights& w);
void validate_tolerance(const PoseTolerance& t);

PoseError pose_error(const Mat4& virtual_pose, const Mat4& physical_pose, const PoseWeights& weights = {});

bool is_aligned(const Mat4& virtual_pose, const Mat4& physical_pose, const PoseTolerance& tol = {});

// D with D * virtual_pose = physical_pose.
Mat4 alignment_delta(const Mat4& virtual_pose, const Mat4& physical_pose);

struct PointPair {
  Vec3 pre;
  Vec3 img;
};

struct RigidFit {
  Mat4 rotation;
  Vec3 translation;
  double rms = 0.0;

  Mat4 matrix() const { return translation_matrix(translation) * rotation; }
};

// Least-squares rigid motion (det +1) taking pre onto img.
// Throws DegenerateConfiguration for fewer than 3 pairs or collinear pre points.
RigidFit kabsch_align(std::span<const PointPair> pairs);

struct Hint {
  TransformStep step;
  double residual_after = 0.0;
};

// The single step with the largest drop in pose_error total, or nullopt when
// the poses are already aligned. Linear factors (rotation, scale) are offered
// before the translation while they are still off, since a later world-frame
// turn or scale would move the model's origin again. Ties go
// translate > rotate > scale. Throws NoImprovingStep when no single step
// lowers the error.
std::optional<Hint> suggest_hint(const Mat4& virtual_pose, const Mat4& physical_pose,
                                 const PoseWeights& weights = {}, const PoseTolerance& tol = {});

}  // namespace xformplay
