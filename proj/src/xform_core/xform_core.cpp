#include "xformplay/xform_core.hpp"

#include <numbers>
#include <sstream>

#include "xformplay/error.hpp"

namespace xformplay {

namespace {

constexpr double kSingularDet = 1e-12;

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Angle Angle::radians(double rad) { return Angle(rad * 180.0 / std::numbers::pi); }

double Angle::rad() const { return deg_ * std::numbers::pi / 180.0; }

Angle Angle::normalized() const {
  double r = std::fmod(deg_, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return Angle(r);
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Vec3 axis_unit(Axis axis) {
  switch (axis) {
    case Axis::X: return {1, 0, 0};
    case Axis::Y: return {0, 1, 0};
    case Axis::Z: return {0, 0, 1};
  }
  return {};
}

void validate_step(const TransformStep& step) {
  std::visit(Overloaded{
                 [](const Translate& t) {
                   if (!t.offset.is_finite())
                     throw Error(ErrorCode::InvalidParameter, "translation components must be finite");
                 },
                 [](const Rotate& r) {
                   if (!std::isfinite(r.angle.deg()))
                     throw Error(ErrorCode::InvalidParameter, "rotation angle must be finite");
                 },
                 [](const Scale& s) {
                   if (!std::isfinite(s.factor) || s.factor <= 0.0)
                     throw Error(ErrorCode::InvalidParameter,
                                 "scale factor must be finite and positive, got " + fmt_num(s.factor));
                 },
             },
             step);
}

std::string describe(const TransformStep& step) {
  return std::visit(Overloaded{
                        [](const Translate& t) {
                          return "translate " + fmt_num(t.offset.x) + " " + fmt_num(t.offset.y) + " " +
                                 fmt_num(t.offset.z);
                        },
                        [](const Rotate& r) {
                          return std::string("rotate ") + axis_name(r.axis) + " " + fmt_num(r.angle.deg());
                        },
                        [](const Scale& s) { return "scale " + fmt_num(s.factor); },
                    },
                    step);
}

Mat4::Mat4() : cells_{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1} {}

Mat4 Mat4::zero() {
  Mat4 m;
  m.cells_.fill(0.0);
  return m;
}

Mat4 Mat4::from_rows(const std::array<double, 16>& cells) {
  Mat4 m;
  m.cells_ = cells;
  return m;
}

Mat4 Mat4::transposed() const {
  Mat4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = (*this)(j, i);
  return t;
}

bool Mat4::is_affine() const {
  return (*this)(3, 0) == 0.0 && (*this)(3, 1) == 0.0 && (*this)(3, 2) == 0.0 && (*this)(3, 3) == 1.0;
}

bool Mat4::is_finite() const {
  for (double v : cells_)
    if (!std::isfinite(v)) return false;
  return true;
}

double Mat4::upper3_determinant() const {
  const Mat4& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r = Mat4::zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double sum = a(i, 0) * b(0, j);
      for (int k = 1; k < 4; ++k) sum += a(i, k) * b(k, j);
      r(i, j) = sum;
    }
  }
  return r;
}

double max_abs_diff(const Mat4& a, const Mat4& b) {
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) worst = std::max(worst, std::abs(a.cells()[i] - b.cells()[i]));
  return worst;
}

void sincos_degrees(double deg, double& s, double& c) {
  const double r = Angle::degrees(deg).normalized().deg();
  const double mag = std::abs(r);
  double sm = 0.0;
  if (mag == 0.0) {
    sm = 0.0;
    c = 1.0;
  } else if (mag == 90.0) {
    sm = 1.0;
    c = 0.0;
  } else if (mag == 180.0) {
    sm = 0.0;
    c = -1.0;
  } else {
    const double rad = mag * std::numbers::pi / 180.0;
    sm = std::sin(rad);
    c = std::cos(rad);
  }
  s = r < 0.0 ? -sm : sm;
}

Mat4 rotation_matrix(Axis axis, Angle angle) {
  if (!std::isfinite(angle.deg()))
    throw Error(ErrorCode::InvalidParameter, "rotation angle must be finite");
  double s = 0.0;
  double c = 1.0;
  sincos_degrees(angle.deg(), s, c);
  Mat4 m;
  switch (axis) {
    case Axis::X:
      m(1, 1) = c;
      m(1, 2) = -s;
      m(2, 1) = s;
      m(2, 2) = c;
      break;
    case Axis::Y:
      m(0, 0) = c;
      m(0, 2) = s;
      m(2, 0) = -s;
      m(2, 2) = c;
      break;
    case Axis::Z:
      m(0, 0) = c;
      m(0, 1) = -s;
      m(1, 0) = s;
      m(1, 1) = c;
      break;
  }
  return m;
}

Mat4 translation_matrix(const Vec3& v) {
  if (!v.is_finite()) throw Error(ErrorCode::InvalidParameter, "translation components must be finite");
  Mat4 m;
  m(0, 3) = v.x;
  m(1, 3) = v.y;
  m(2, 3) = v.z;
  return m;
}

Mat4 scale_matrix(double factor) {
  validate_step(Scale{factor});
  Mat4 m;
  m(0, 0) = factor;
  m(1, 1) = factor;
  m(2, 2) = factor;
  return m;
}

Mat4 step_matrix(const TransformStep& step) {
  return std::visit(Overloaded{
                        [](const Translate& t) { return translation_matrix(t.offset); },
                        [](const Rotate& r) { return rotation_matrix(r.axis, r.angle); },
                        [](const Scale& s) { return scale_matrix(s.factor); },
                    },
                    step);
}

Mat4 compose(std::span<const TransformStep> steps) {
  Mat4 m;
  for (const auto& step : steps) m = step_matrix(step) * m;
  return m;
}

Vec3 apply_point(const Mat4& m, const Vec3& p) {
  if (!m.is_affine()) throw Error(ErrorCode::UnsupportedMatrix, "point mapping needs an affine bottom row (0,0,0,1)");
  return {m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2) * p.z + m(0, 3),
          m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2) * p.z + m(1, 3),
          m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2) * p.z + m(2, 3)};
}

namespace {

Mat4 invert_affine(const Mat4& m) {
  const double det = m.upper3_determinant();
  if (!(std::abs(det) >= kSingularDet)) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
  Mat4 inv;
  // Adjugate of the upper 3x3 divided by det.
  inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
  inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
  inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
  inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
  inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
  inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
  inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
  inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
  inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
  const Vec3 t = m.translation();
  for (int i = 0; i < 3; ++i) inv(i, 3) = -(inv(i, 0) * t.x + inv(i, 1) * t.y + inv(i, 2) * t.z);
  return inv;
}

double det3(double a, double b, double c, double d, double e, double f, double g, double h, double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

Mat4 invert_general(const Mat4& m) {
  Mat4 cof = Mat4::zero();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::array<double, 9> minor{};
      int k = 0;
      for (int i = 0; i < 4; ++i) {
        if (i == r) continue;
        for (int j = 0; j < 4; ++j) {
          if (j == c) continue;
          minor[k++] = m(i, j);
        }
      }
      const double d = det3(minor[0], minor[1], minor[2], minor[3], minor[4], minor[5], minor[6], minor[7], minor[8]);
      cof(r, c) = ((r + c) % 2 == 0) ? d : -d;
    }
  }
  double det = 0.0;
  for (int c = 0; c < 4; ++c) det += m(0, c) * cof(0, c);
  if (!(std::abs(det) >= kSingularDet)) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
  Mat4 inv = Mat4::zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv(i, j) = cof(j, i) / det;
  return inv;
}

}  // namespace

Mat4 invert(const Mat4& m) {
  if (!m.is_finite()) throw Error(ErrorCode::InvalidParameter, "matrix entries must be finite");
  return m.is_affine() ? invert_affine(m) : invert_general(m);
}

Mat4 MulExpansion::assembled() const {
  Mat4 m = Mat4::zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cell(i, j).sum;
  return m;
}

MulExpansion multiply_expansion(const Mat4& a, const Mat4& b) {
  MulExpansion e{a, b, {}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      ExpansionCell& cell = e.cells[i * 4 + j];
      for (int k = 0; k < 4; ++k) cell.terms[k] = {a(i, k), b(k, j), a(i, k) * b(k, j)};
      double sum = cell.terms[0].product;
      for (int k = 1; k < 4; ++k) sum += cell.terms[k].product;
      cell.sum = sum;
    }
  }
  return e;
}

}  // namespace xformplay
