#pragma once

// Homogeneous 4x4 transformation algebra.
//
// Conventions used throughout the project:
//   * column vectors, p' = M * p, so translation lives in column 4;
//   * right-handed axes, positive angles turn counterclockwise when seen
//     from the positive end of the axis;
//   * angles cross every interface in degrees;
//   * a new step is applied in the world frame, i.e. it left-multiplies.
//
// Matrix cells are addressed zero-based: cell (row 1, col 4) is m(0, 3).

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace xformplay {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Angle stored in degrees.
class Angle {
 public:
  constexpr Angle() = default;
  static constexpr Angle degrees(double deg) { return Angle(deg); }
  static Angle radians(double rad);

  constexpr double deg() const { return deg_; }
  double rad() const;

  // Equivalent angle in (-180, 180].
  Angle normalized() const;

  constexpr Angle operator-() const { return Angle(-deg_); }
  friend constexpr bool operator==(const Angle&, const Angle&) = default;

 private:
  constexpr explicit Angle(double deg) : deg_(deg) {}
  double deg_ = 0.0;
};

enum class Axis { X, Y, Z };

const char* axis_name(Axis axis);  // "x" | "y" | "z"
Vec3 axis_unit(Axis axis);

struct Translate {
  Vec3 offset;
  friend bool operator==(const Translate&, const Translate&) = default;
};

struct Rotate {
  Axis axis = Axis::Z;
  Angle angle;
  friend bool operator==(const Rotate&, const Rotate&) = default;
};

// Uniform scale about the origin.
struct Scale {
  double factor = 1.0;
  friend bool operator==(const Scale&, const Scale&) = default;
};

using TransformStep = std::variant<Translate, Rotate, Scale>;

// Throws Error(InvalidParameter) when a step cannot build a matrix.
void validate_step(const TransformStep& step);

// Human readable form, e.g. "rotate z 90" or "translate 1 2 3".
std::string describe(const TransformStep& step);

class Mat4 {
 public:
  // Identity.
  Mat4();

  static Mat4 identity() { return Mat4(); }
  static Mat4 zero();
  // Row-major cells.
  static Mat4 from_rows(const std::array<double, 16>& cells);

  double operator()(int row, int col) const { return cells_[row * 4 + col]; }
  double& operator()(int row, int col) { return cells_[row * 4 + col]; }

  std::span<const double, 16> cells() const { return cells_; }

  Vec3 column3(int col) const { return {(*this)(0, col), (*this)(1, col), (*this)(2, col)}; }
  Vec3 translation() const { return column3(3); }

  Mat4 transposed() const;
  // Bottom row is exactly (0, 0, 0, 1).
  bool is_affine() const;
  bool is_finite() const;
  double upper3_determinant() const;

  // Cell (i,j) is ((a_i0*b_0j + a_i1*b_1j) + a_i2*b_2j) + a_i3*b_3j,
  // the same order multiply_expansion reports.
  friend Mat4 operator*(const Mat4& a, const Mat4& b);
  friend bool operator==(const Mat4&, const Mat4&) = default;

 private:
  std::array<double, 16> cells_;
};

// Largest absolute cell difference.
double max_abs_diff(const Mat4& a, const Mat4& b);

// Exact sine and cosine at multiples of 90 degrees, so quarter turns build
// matrices with true zeros.
void sincos_degrees(double deg, double& s, double& c);

Mat4 rotation_matrix(Axis axis, Angle angle);
Mat4 translation_matrix(const Vec3& v);
Mat4 scale_matrix(double factor);
Mat4 step_matrix(const TransformStep& step);

// M_n * ... * M_1; the empty list gives the identity.
Mat4 compose(std::span<const TransformStep> steps);

// Throws Error(UnsupportedMatrix) unless m is affine.
Vec3 apply_point(const Mat4& m, const Vec3& p);

// Throws Error(SingularMatrix) when |det| < 1e-12.
Mat4 invert(const Mat4& m);

struct ExpansionTerm {
  double left = 0.0;     // a_ik
  double right = 0.0;    // b_kj
  double product = 0.0;  // a_ik * b_kj
};

struct ExpansionCell {
  std::array<ExpansionTerm, 4> terms;
  double sum = 0.0;
};

// Cell-by-cell working of a * b, as a student would write it out.
struct MulExpansion {
  Mat4 left;
  Mat4 right;
  std::array<ExpansionCell, 16> cells;  // row-major

  const ExpansionCell& cell(int row, int col) const { return cells[row * 4 + col]; }
  Mat4 assembled() const;
};

MulExpansion multiply_expansion(const Mat4& a, const Mat4& b);

}  // namespace xformplay
