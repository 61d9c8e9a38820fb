#pragma once

// Random inputs for property tests plus a couple of assertion helpers.

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "xformplay/error.hpp"
#include "xformplay/xform_core.hpp"

namespace xformplay::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(eng_); }

  Axis axis() { return static_cast<Axis>(integer(0, 2)); }
  Angle angle(double lo = -180.0, double hi = 180.0) { return Angle::degrees(uniform(lo, hi)); }
  Vec3 vec(double r) { return {uniform(-r, r), uniform(-r, r), uniform(-r, r)}; }

  // Uniformly distributed rotation via a random unit quaternion.
  Mat4 rotation() {
    double q[4];
    double n = 0.0;
    do {
      n = 0.0;
      for (double& c : q) {
        c = normal(1.0);
        n += c * c;
      }
    } while (n < 1e-8);
    n = std::sqrt(n);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    return Mat4::from_rows({1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y), 0,  //
                            2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x), 0,  //
                            2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y), 0,  //
                            0, 0, 0, 1});
  }

  TransformStep step() {
    switch (integer(0, 2)) {
      case 0:
        return Translate{vec(10.0)};
      case 1:
        return Rotate{axis(), angle()};
      default:
        return Scale{uniform(0.25, 4.0)};
    }
  }

  std::vector<TransformStep> steps(int lo, int hi) {
    std::vector<TransformStep> out(static_cast<std::size_t>(integer(lo, hi)));
    for (auto& s : out) s = step();
    return out;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline void expect_near(const Mat4& a, const Mat4& b, double tol) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(a(i, j), b(i, j), tol) << "cell (" << i + 1 << "," << j + 1 << ")";
}

inline void expect_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

template <class F>
void expect_error(F&& f, ErrorCode code) {
  try {
    f();
    ADD_FAILURE() << "expected " << code_name(code) << ", nothing was thrown";
  } catch (const Error& e) {
    EXPECT_EQ(code_name(e.code()), code_name(code)) << e.what();
  }
}

}  // namespace xformplay::testing
