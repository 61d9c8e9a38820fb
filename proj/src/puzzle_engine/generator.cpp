#include <random>

#include "xformplay/error.hpp"
#include "xformplay/puzzle_engine.hpp"

namespace xformplay {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not,
// so values are drawn with plain modulo to stay identical across toolchains.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  bool coin() { return below(2) == 1; }

  Axis axis() { return static_cast<Axis>(below(3)); }

  // Nonzero multiple of 15 degrees in [-180, 180].
  Angle angle() {
    auto k = static_cast<int>(below(24)) - 12;
    if (k >= 0) ++k;
    return Angle::degrees(15.0 * k);
  }

  // Nonzero half-stud value in [-8, 8].
  double offset() {
    auto k = static_cast<int>(below(32)) - 16;
    if (k >= 0) ++k;
    return 0.5 * k;
  }

  double scale() { return coin() ? 2.0 : 0.5; }

  // Translation with exactly `nonzero` nonzero components (1..3).
  Vec3 translation(int nonzero) {
    double v[3] = {0.0, 0.0, 0.0};
    if (nonzero >= 3) {
      for (double& c : v) c = offset();
    } else if (nonzero == 2) {
      const auto skip = static_cast<int>(below(3));
      for (int i = 0; i < 3; ++i)
        if (i != skip) v[i] = offset();
    } else {
      v[below(3)] = offset();
    }
    return {v[0], v[1], v[2]};
  }

  Rotate rotation() { return Rotate{axis(), angle()}; }

 private:
  std::mt19937_64 eng_;
};

enum class Factor { T, R, S };

}  // namespace

PuzzleSpec generate_puzzle(std::uint64_t seed, Level level, int difficulty) {
  if (difficulty < kMinDifficulty || difficulty > kMaxDifficulty)
    throw Error(ErrorCode::InvalidParameter, "difficulty must be in 1..5");

  Draw draw(seed);
  const bool scale_ok = level == Level::Function;
  std::vector<TransformStep> steps;

  switch (difficulty) {
    case 1:
      if (draw.coin()) {
        steps.push_back(Translate{draw.translation(1)});
      } else {
        steps.push_back(draw.rotation());
      }
      break;
    case 2: {
      const auto kind = static_cast<Factor>(draw.below(scale_ok ? 3 : 2));
      if (kind == Factor::T) steps.push_back(Translate{draw.translation(2 + static_cast<int>(draw.below(2)))});
      if (kind == Factor::R) steps.push_back(draw.rotation());
      if (kind == Factor::S) steps.push_back(Scale{draw.scale()});
      break;
    }
    case 3: {
      // Two factors, canonical S, R, T order.
      bool use_t = true;
      bool use_r = true;
      bool use_s = false;
      if (scale_ok) {
        const auto drop = draw.below(3);
        use_t = drop != 0;
        use_r = drop != 1;
        use_s = drop != 2;
      }
      if (use_s) steps.push_back(Scale{draw.scale()});
      if (use_r) steps.push_back(draw.rotation());
      if (use_t) steps.push_back(Translate{draw.translation(1 + static_cast<int>(draw.below(3)))});
      break;
    }
    case 4:
      // Move first, then turn: the turn swings the moved model about the origin.
      steps.push_back(Translate{draw.translation(2 + static_cast<int>(draw.below(2)))});
      steps.push_back(draw.rotation());
      break;
    case 5:
      if (scale_ok) steps.push_back(Scale{draw.scale()});
      steps.push_back(draw.rotation());
      steps.push_back(Translate{draw.translation(scale_ok ? 2 + static_cast<int>(draw.below(2)) : 3)});
      break;
    default:
      break;
  }

  PuzzleSpec spec;
  spec.id = "gen-" + std::string(level_name(level)) + "-d" + std::to_string(difficulty) + "-s" + std::to_string(seed);
  spec.level = level;
  spec.target_steps = std::move(steps);
  spec.allowed_controls = all_controls();
  if (!scale_ok) spec.allowed_controls.erase(Control::Scale);
  spec.seed = seed;
  spec.model_ref = kDefaultModelId;
  validate_spec(spec);
  return spec;
}

}  // namespace xformplay
