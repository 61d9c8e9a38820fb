#include <gtest/gtest.h>

#include <cmath>

#include "support/support.hpp"
#include "xformplay/xform_core.hpp"

using namespace xformplay;
using xformplay::testing::expect_error;
using xformplay::testing::expect_near;
using xformplay::testing::Rng;

namespace {

const double kSqrt3Over2 = std::sqrt(3.0) / 2.0;

Mat4 upper3(const Mat4& m) {
  Mat4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(i, j);
  return r;
}

}  // namespace

TEST(Rotation, ZeroDegreesIsIdentity) { EXPECT_EQ(rotation_matrix(Axis::Z, Angle::degrees(0)), Mat4::identity()); }

TEST(Rotation, QuarterTurnAboutZ) {
  const Vec3 p = apply_point(rotation_matrix(Axis::Z, Angle::degrees(90)), {1, 0, 0});
  EXPECT_EQ(p, (Vec3{0, 1, 0}));
}

TEST(Rotation, ThirtyDegreesAboutX) {
  // cos 30 = sqrt(3)/2 and sin 30 = 1/2, written out rather than taken from std::cos.
  const Mat4 r = rotation_matrix(Axis::X, Angle::degrees(30));
  EXPECT_NEAR(r(1, 1), kSqrt3Over2, 1e-15);
  EXPECT_NEAR(r(2, 1), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 2), -0.5, 1e-15);
  EXPECT_NEAR(r(2, 2), kSqrt3Over2, 1e-15);
  EXPECT_EQ(r(0, 0), 1.0);
}

TEST(Rotation, QuarterTurnsHaveExactZeros) {
  for (double deg : {-270.0, -180.0, -90.0, 90.0, 180.0, 270.0, 360.0, 450.0}) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const Mat4 r = rotation_matrix(a, Angle::degrees(deg));
      for (double c : r.cells()) EXPECT_TRUE(c == 0.0 || c == 1.0 || c == -1.0) << deg;
    }
  }
}

TEST(Rotation, RightHandedSigns) {
  // Positive turns are counterclockwise seen from the positive axis end.
  expect_near(apply_point(rotation_matrix(Axis::X, Angle::degrees(90)), {0, 1, 0}), {0, 0, 1}, 0);
  expect_near(apply_point(rotation_matrix(Axis::Y, Angle::degrees(90)), {0, 0, 1}), {1, 0, 0}, 0);
  expect_near(apply_point(rotation_matrix(Axis::Z, Angle::degrees(90)), {1, 0, 0}), {0, 1, 0}, 0);
}

TEST(Translation, Examples) {
  EXPECT_EQ(translation_matrix({0, 0, 0}), Mat4::identity());
  EXPECT_EQ(apply_point(translation_matrix({3, 0, 0}), {0, 0, 0}), (Vec3{3, 0, 0}));
  const std::vector<TransformStep> twice{Translate{{1, 2, 3}}, Translate{{1, 2, 3}}};
  EXPECT_EQ(compose(twice).translation(), (Vec3{2, 4, 6}));
}

TEST(ScaleMatrix, Examples) {
  EXPECT_EQ(scale_matrix(1), Mat4::identity());
  EXPECT_EQ(apply_point(scale_matrix(2), {1, 2, 3}), (Vec3{2, 4, 6}));
  const std::vector<TransformStep> round{Scale{2}, Scale{0.5}};
  EXPECT_EQ(compose(round), Mat4::identity());
}

TEST(Compose, EmptyIsIdentity) { EXPECT_EQ(compose({}), Mat4::identity()); }

TEST(Compose, OrderMatters) {
  const std::vector<TransformStep> a{Translate{{1, 0, 0}}, Rotate{Axis::Z, Angle::degrees(90)}};
  const std::vector<TransformStep> b{Rotate{Axis::Z, Angle::degrees(90)}, Translate{{1, 0, 0}}};
  expect_near(apply_point(compose(a), {0, 0, 0}), {0, 1, 0}, 1e-15);
  expect_near(apply_point(compose(b), {0, 0, 0}), {1, 0, 0}, 1e-15);
}

TEST(ApplyPoint, Examples) {
  EXPECT_EQ(apply_point(Mat4::identity(), {5, -2, 7}), (Vec3{5, -2, 7}));
  EXPECT_EQ(apply_point(scale_matrix(2), {1, 1, 1}), (Vec3{2, 2, 2}));
  expect_near(apply_point(rotation_matrix(Axis::Z, Angle::degrees(30)), {1, 0, 0}), {kSqrt3Over2, 0.5, 0}, 1e-15);
}

TEST(ApplyPoint, RejectsProjectiveRow) {
  Mat4 m;
  m(3, 0) = 0.5;
  expect_error([&] { apply_point(m, {1, 1, 1}); }, ErrorCode::UnsupportedMatrix);
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(Mat4::identity()), Mat4::identity());
  EXPECT_EQ(invert(translation_matrix({1, 2, 3})), translation_matrix({-1, -2, -3}));
  const std::vector<TransformStep> fwd{Rotate{Axis::Z, Angle::degrees(90)}, Scale{2}};
  const std::vector<TransformStep> back{Scale{0.5}, Rotate{Axis::Z, Angle::degrees(-90)}};
  expect_near(invert(compose(fwd)), compose(back), 1e-15);
  expect_near(invert(compose(fwd)) * compose(fwd), Mat4::identity(), 1e-15);
}

TEST(Invert, Singular) {
  Mat4 m;
  m(2, 2) = 0.0;
  expect_error([&] { invert(m); }, ErrorCode::SingularMatrix);
}

TEST(Invert, GeneralMatrixPath) {
  // A projective bottom row goes through the cofactor path.
  const Mat4 m = Mat4::from_rows({2, 0, 1, 0, 0, 1, 0, 3, 1, 0, 1, 0, 0.5, 0, 0, 1});
  expect_near(m * invert(m), Mat4::identity(), 1e-14);
}

TEST(Invert, RandomProperty) {
  Rng rng(11);
  for (int n = 0; n < 500; ++n) {
    const Mat4 m = compose(rng.steps(1, 5));
    expect_near(invert(m) * m, Mat4::identity(), 1e-9);
  }
}

TEST(Steps, Validation) {
  expect_error([] { validate_step(Scale{0}); }, ErrorCode::InvalidParameter);
  expect_error([] { validate_step(Scale{-1}); }, ErrorCode::InvalidParameter);
  expect_error([] { validate_step(Translate{{NAN, 0, 0}}); }, ErrorCode::InvalidParameter);
  expect_error([] { validate_step(Rotate{Axis::X, Angle::degrees(INFINITY)}); }, ErrorCode::InvalidParameter);
  EXPECT_NO_THROW(validate_step(Rotate{Axis::X, Angle::degrees(720)}));
}

TEST(Steps, Describe) {
  EXPECT_EQ(describe(Rotate{Axis::Z, Angle::degrees(90)}), "rotate z 90");
  EXPECT_EQ(describe(Translate{{1, 2, 3}}), "translate 1 2 3");
  EXPECT_EQ(describe(Scale{0.5}), "scale 0.5");
}

TEST(Angle, Normalized) {
  EXPECT_EQ(Angle::degrees(180).normalized().deg(), 180.0);
  EXPECT_EQ(Angle::degrees(-180).normalized().deg(), 180.0);
  EXPECT_EQ(Angle::degrees(270).normalized().deg(), -90.0);
  EXPECT_EQ(Angle::degrees(-450).normalized().deg(), -90.0);
  EXPECT_EQ(Angle::degrees(30).normalized().deg(), 30.0);
}

TEST(Expansion, IdentityLeft) {
  Rng rng(3);
  const Mat4 m = compose(rng.steps(3, 3));
  const MulExpansion ex = multiply_expansion(Mat4::identity(), m);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(ex.cell(i, j).sum, m(i, j));
}

TEST(Expansion, TranslationsAdd) {
  const MulExpansion ex = multiply_expansion(translation_matrix({1, 0, 0}), translation_matrix({2, 0, 0}));
  const ExpansionCell& c = ex.cell(0, 3);
  EXPECT_EQ(c.sum, 3.0);
  double total = 0.0;
  for (const auto& t : c.terms) {
    EXPECT_EQ(t.product, t.left * t.right);
    total += t.product;
  }
  EXPECT_EQ(total, 3.0);
}

TEST(Expansion, TwoQuarterTurns) {
  const Mat4 r = rotation_matrix(Axis::Z, Angle::degrees(90));
  EXPECT_EQ(multiply_expansion(r, r).assembled(), rotation_matrix(Axis::Z, Angle::degrees(180)));
}

TEST(Expansion, SumsMatchProductExactly) {
  Rng rng(5);
  for (int n = 0; n < 1000; ++n) {
    const Mat4 a = compose(rng.steps(1, 4));
    const Mat4 b = compose(rng.steps(1, 4));
    const MulExpansion ex = multiply_expansion(a, b);
    EXPECT_EQ(ex.assembled(), a * b);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const ExpansionCell& c = ex.cell(i, j);
        for (int k = 0; k < 4; ++k) {
          EXPECT_EQ(c.terms[k].left, a(i, k));
          EXPECT_EQ(c.terms[k].right, b(k, j));
        }
      }
    }
  }
}

TEST(Properties, RotationsAreProperOrthonormal) {
  Rng rng(1);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    for (int n = 0; n < 1000; ++n) {
      const Angle a = rng.angle(-360, 360);
      const Mat4 r = rotation_matrix(axis, a);
      expect_near(upper3(r.transposed() * r), Mat4::identity(), 1e-12);
      EXPECT_NEAR(r.upper3_determinant(), 1.0, 1e-12);
      expect_near(r * rotation_matrix(axis, -a), Mat4::identity(), 1e-12);
    }
  }
}

TEST(Properties, ComposeIsAssociative) {
  Rng rng(2);
  for (int n = 0; n < 1000; ++n) {
    auto a = rng.steps(0, 4);
    const auto b = rng.steps(0, 4);
    const Mat4 ma = compose(a);
    const Mat4 mb = compose(b);
    a.insert(a.end(), b.begin(), b.end());
    expect_near(compose(a), mb * ma, 1e-12 * std::max(1.0, max_abs_diff(mb * ma, Mat4::zero())));
  }
}

TEST(Properties, MatrixPathEqualsStepPath) {
  Rng rng(4);
  for (int n = 0; n < 1000; ++n) {
    const auto steps = rng.steps(1, 5);
    const Vec3 p = rng.vec(5);
    Vec3 q = p;
    for (const auto& s : steps) q = apply_point(step_matrix(s), q);
    const Vec3 m = apply_point(compose(steps), p);
    const double scale = std::max(1.0, q.norm());
    expect_near(m, q, 1e-12 * scale);
  }
}

TEST(Properties, LayoutConformance) {
  // Translation fills only cells (1,4)..(3,4); rotation and scale only the
  // upper 3x3. Row 4 is always exactly (0, 0, 0, 1).
  Rng rng(6);
  for (int n = 0; n < 1000; ++n) {
    const Mat4 t = translation_matrix(rng.vec(20));
    const Mat4 r = rotation_matrix(rng.axis(), rng.angle(-360, 360));
    const Mat4 s = scale_matrix(rng.uniform(0.01, 100));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == 3) {
          const double want = j == 3 ? 1.0 : 0.0;
          EXPECT_EQ(t(i, j), want);
          EXPECT_EQ(r(i, j), want);
          EXPECT_EQ(s(i, j), want);
        } else if (j == 3) {
          EXPECT_EQ(r(i, j), 0.0);
          EXPECT_EQ(s(i, j), 0.0);
        } else {
          EXPECT_EQ(t(i, j), i == j ? 1.0 : 0.0);
          if (i != j) {
            EXPECT_EQ(s(i, j), 0.0);
          }
        }
      }
    }
  }
}

TEST(Mat4, RowMajorAccess) {
  const Mat4 m = Mat4::from_rows({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 0, 0, 0, 1});
  EXPECT_EQ(m(0, 3), 4.0);
  EXPECT_EQ(m(2, 0), 9.0);
  EXPECT_EQ(m.cells()[6], 7.0);
  EXPECT_EQ(m.translation(), (Vec3{4, 8, 12}));
  EXPECT_TRUE(m.is_affine());
}
