#include "xformplay/pose_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "xformplay/error.hpp"

namespace xformplay {

namespace {

constexpr double kShearTol = 1e-6;
constexpr double kRotationTol = 1e-6;
constexpr double kTinySin = 1e-12;
constexpr double kFactorEps = 1e-9;  // degrees

double orthonormality_defect(const Mat4& r) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += r(k, i) * r(k, j);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

Mat4 upper3(const Mat4& m) {
  Mat4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Skew part (r21 - r12, r02 - r20, r10 - r01) = 2 sin(theta) * axis.
Vec3 skew_vector(const Mat4& r) {
  return {r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
}

Vec3 first_nonzero_positive(Vec3 v) {
  for (int i = 0; i < 3; ++i) {
    const double c = v[i];
    if (std::abs(c) > kTinySin) return c < 0.0 ? -v : v;
  }
  return v;
}

void require_rotation(const Mat4& r, const char* what) {
  if (!r.is_finite() || orthonormality_defect(r) > kRotationTol || r.upper3_determinant() <= 0.0)
    throw Error(ErrorCode::InvalidRotation, std::string(what) + " is not a pure rotation");
}

std::array<double, 3> euler_zyx(const Mat4& r) {
  // R = Rz(gamma) * Ry(beta) * Rx(alpha); returned as {alpha, beta, gamma} in degrees.
  const double cb = std::sqrt(r(0, 0) * r(0, 0) + r(1, 0) * r(1, 0));
  const double beta = std::atan2(-r(2, 0), cb);
  double alpha = 0.0;
  double gamma = 0.0;
  if (cb > 1e-9) {
    alpha = std::atan2(r(2, 1), r(2, 2));
    gamma = std::atan2(r(1, 0), r(0, 0));
  } else {
    gamma = std::atan2(-r(0, 1), r(1, 1));
  }
  return {rad_to_deg(alpha), rad_to_deg(beta), rad_to_deg(gamma)};
}

}  // namespace

Mat4 PoseDecomposition::recompose() const {
  return translation_matrix(translation) * rotation * scale_matrix(scale);
}

AxisAngle rotation_axis_angle(const Mat4& r) {
  const Vec3 w = skew_vector(r);
  const double s = w.norm() / 2.0;
  const double c = (r(0, 0) + r(1, 1) + r(2, 2) - 1.0) / 2.0;
  const double theta = std::atan2(s, c);

  AxisAngle out;
  if (s < kTinySin && c > 0.0) {
    out.axis = {0, 0, 1};
    out.angle = Angle::degrees(0.0);
    return out;
  }
  out.angle = Angle::degrees(rad_to_deg(theta));
  if (c < 0.0 && s < 1e-3) {
    // Near a half turn the skew part vanishes; read the axis from the
    // symmetric part (1 - cos) * n n^T instead.
    int k = 0;
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
      const double d = r(i, i) - c;
      if (d > best) {
        best = d;
        k = i;
      }
    }
    Vec3 n{(r(0, k) + r(k, 0)) / 2.0, (r(1, k) + r(k, 1)) / 2.0, (r(2, k) + r(k, 2)) / 2.0};
    if (k == 0) n.x -= c;
    if (k == 1) n.y -= c;
    if (k == 2) n.z -= c;
    n = n / n.norm();
    if (s < kTinySin) {
      n = first_nonzero_positive(n);
    } else if (n.dot(w) < 0.0) {
      n = -n;
    }
    out.axis = n;
  } else {
    out.axis = w / w.norm();
  }
  return out;
}

PoseDecomposition decompose_trs(const Mat4& m) {
  if (!m.is_finite()) throw Error(ErrorCode::InvalidParameter, "matrix entries must be finite");
  if (!m.is_affine()) throw Error(ErrorCode::UnsupportedMatrix, "TRS factoring needs an affine matrix");
  const double det = m.upper3_determinant();
  if (!(det > 0.0))
    throw Error(ErrorCode::ReflectionOrSingular, "upper 3x3 determinant must be positive");

  PoseDecomposition d;
  d.scale = std::cbrt(det);
  d.translation = m.translation();
  d.rotation = upper3(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.rotation(i, j) /= d.scale;
  if (orthonormality_defect(d.rotation) > kShearTol)
    throw Error(ErrorCode::ShearOrNonuniformScale, "matrix carries shear or non-uniform scale");
  d.axis_angle = rotation_axis_angle(d.rotation);
  return d;
}

Angle rotation_angle_between(const Mat4& r1, const Mat4& r2) {
  require_rotation(r1, "first argument");
  require_rotation(r2, "second argument");
  // Relative rotation q = r1^T r2, via the skew part and trace; the atan2
  // form equals arccos((trace - 1) / 2) and keeps precision at 0 and 180.
  Mat4 q = Mat4::zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double sum = r1(0, i) * r2(0, j);
      for (int k = 1; k < 3; ++k) sum += r1(k, i) * r2(k, j);
      q(i, j) = sum;
    }
  }
  const double s = skew_vector(q).norm() / 2.0;
  const double c = (q(0, 0) + q(1, 1) + q(2, 2) - 1.0) / 2.0;
  return Angle::degrees(rad_to_deg(std::atan2(s, c)));
}

std::vector<AxisRotation> axis_rotation_factors(const Mat4& rotation) {
  const AxisAngle aa = rotation_axis_angle(rotation);
  if (std::abs(aa.angle.deg()) < kFactorEps) return {};

  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const Vec3 e = axis_unit(axis);
    const double along = aa.axis.dot(e);
    if (std::abs(along) > 1.0 - 1e-12) {
      const double deg = along > 0.0 ? aa.angle.deg() : -aa.angle.deg();
      return {{axis, Angle::degrees(deg).normalized()}};
    }
  }

  const auto a = euler_zyx(rotation);
  const std::array<double, 3> b{Angle::degrees(a[0] + 180.0).normalized().deg(),
                                Angle::degrees(180.0 - a[1]).normalized().deg(),
                                Angle::degrees(a[2] + 180.0).normalized().deg()};
  auto sweep = [](const std::array<double, 3>& e) {
    return std::abs(e[0]) + std::abs(e[1]) + std::abs(e[2]);
  };
  const auto& pick = sweep(b) < sweep(a) ? b : a;

  std::vector<AxisRotation> out;
  const Axis order[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(pick[i]) >= kFactorEps) out.push_back({order[i], Angle::degrees(pick[i]).normalized()});
  }
  return out;
}

void validate_weights(const PoseWeights& w) {
  for (double v : {w.translation, w.rotation, w.scale})
    if (!std::isfinite(v) || v <= 0.0) throw Error(ErrorCode::InvalidParameter, "pose weights must be positive");
}

void validate_tolerance(const PoseTolerance& t) {
  for (double v : {t.translation, t.rotation, t.scale})
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorCode::InvalidParameter, "pose tolerance must be non-negative");
}

namespace {

PoseError error_between(const PoseDecomposition& a, const PoseDecomposition& b, const PoseWeights& w) {
  PoseError e;
  e.translation = (a.translation - b.translation).norm();
  e.rotation = rotation_angle_between(a.rotation, b.rotation).deg();
  e.scale = std::abs(std::log(a.scale) - std::log(b.scale));
  e.total = w.translation * e.translation + w.rotation * e.rotation + w.scale * e.scale;
  return e;
}

}  // namespace

PoseError pose_error(const Mat4& virtual_pose, const Mat4& physical_pose, const PoseWeights& weights) {
  validate_weights(weights);
  return error_between(decompose_trs(virtual_pose), decompose_trs(physical_pose), weights);
}

bool is_aligned(const Mat4& virtual_pose, const Mat4& physical_pose, const PoseTolerance& tol) {
  validate_tolerance(tol);
  const PoseError e = pose_error(virtual_pose, physical_pose);
  return e.translation <= tol.translation && e.rotation <= tol.rotation && e.scale <= tol.scale;
}

Mat4 alignment_delta(const Mat4& virtual_pose, const Mat4& physical_pose) {
  return physical_pose * invert(virtual_pose);
}

RigidFit kabsch_align(std::span<const PointPair> pairs) {
  if (pairs.size() < 3)
    throw Error(ErrorCode::DegenerateConfiguration, "need at least 3 point correspondences");
  for (const auto& p : pairs)
    if (!p.pre.is_finite() || !p.img.is_finite())
      throw Error(ErrorCode::InvalidParameter, "correspondence coordinates must be finite");

  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::Matrix3Xd pre(3, n);
  Eigen::Matrix3Xd img(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    pre.col(i) << p.pre.x, p.pre.y, p.pre.z;
    img.col(i) << p.img.x, p.img.y, p.img.z;
  }
  const Eigen::Vector3d pre_c = pre.rowwise().mean();
  const Eigen::Vector3d img_c = img.rowwise().mean();
  pre.colwise() -= pre_c;
  img.colwise() -= img_c;

  const Eigen::JacobiSVD<Eigen::Matrix3d> spread(pre * pre.transpose());
  const auto sv = spread.singularValues();
  if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0))
    throw Error(ErrorCode::DegenerateConfiguration, "pre-image points are collinear or coincident");

  const Eigen::Matrix3d cov = pre * img.transpose();
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d rot = v * fix * u.transpose();
  const Eigen::Vector3d t = img_c - rot * pre_c;

  RigidFit fit;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fit.rotation(i, j) = rot(i, j);
  fit.translation = {t.x(), t.y(), t.z()};

  double sq = 0.0;
  for (const auto& p : pairs) {
    const Vec3 d = apply_point(fit.matrix(), p.pre) - p.img;
    sq += d.dot(d);
  }
  fit.rms = std::sqrt(sq / static_cast<double>(pairs.size()));
  return fit;
}

std::optional<Hint> suggest_hint(const Mat4& virtual_pose, const Mat4& physical_pose, const PoseWeights& weights,
                                 const PoseTolerance& tol) {
  validate_weights(weights);
  validate_tolerance(tol);
  const PoseDecomposition dv = decompose_trs(virtual_pose);
  const PoseDecomposition dp = decompose_trs(physical_pose);
  const PoseError now = error_between(dv, dp, weights);
  if (now.translation <= tol.translation && now.rotation <= tol.rotation && now.scale <= tol.scale)
    return std::nullopt;

  const PoseDecomposition delta = decompose_trs(alignment_delta(virtual_pose, physical_pose));

  struct Candidate {
    TransformStep step;
    double residual;
    bool linear;
  };
  std::vector<Candidate> candidates;  // tie order: translate, rotate, scale
  auto consider = [&](const TransformStep& step, bool linear) {
    const Mat4 next = step_matrix(step) * virtual_pose;
    candidates.push_back({step, pose_error(next, physical_pose, weights).total, linear});
  };

  const Vec3 offset = dp.translation - dv.translation;
  if (offset.norm() > 0.0) consider(Translate{offset}, false);
  for (const AxisRotation& f : axis_rotation_factors(delta.rotation)) consider(Rotate{f.axis, f.angle}, true);
  if (delta.scale != 1.0) consider(Scale{delta.scale}, true);

  const bool linear_pending = now.rotation > tol.rotation || now.scale > tol.scale;
  auto best_of = [&](bool linear_only) -> const Candidate* {
    const Candidate* best = nullptr;
    for (const auto& c : candidates) {
      if (linear_only && !c.linear) continue;
      if (!(c.residual < now.total)) continue;
      const double slack = 1e-12 * std::max(1.0, std::abs(c.residual));
      if (best == nullptr || c.residual < best->residual - slack) best = &c;
    }
    return best;
  };

  const Candidate* pick = linear_pending ? best_of(true) : nullptr;
  if (pick == nullptr) pick = best_of(false);
  if (pick == nullptr)
    throw Error(ErrorCode::NoImprovingStep, "no single step reduces the pose error from here");
  return Hint{pick->step, pick->residual};
}

}  // namespace xformplay
