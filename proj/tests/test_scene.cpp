#include <doctest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "rirsim/error.hpp"
#include "rirsim/scene.hpp"

using namespace rirsim;

namespace {

const char* kShoebox = R"(room:
  size: [3, 4, 2.5]
  t60: 0.7
sources:
  - pos: [1, 1, 1]
receivers:
  - pos: [2, 2, 1]
  - pos: [2.5, 3, 1.5]
    pattern: cardioid
    orientation: [0, 1, 0]
sim:
  fs: 16000
  att_max_db: 60
)";

int error_line(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const SceneError& e) {
    return e.line();
  }
  return -1;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse a scene with defaults") {
  const Scene s = parse_scene(kShoebox);
  CHECK(s.room.size == Point3{3, 4, 2.5});
  CHECK(s.room.t60 == 0.7);
  CHECK_FALSE(s.room.beta);
  REQUIRE(s.sources.size() == 1);
  REQUIRE(s.receivers.size() == 2);
  CHECK(s.receivers[0].pattern == PolarPattern::kOmni);
  CHECK(s.receivers[0].orientation == Point3{1, 0, 0});
  CHECK(s.receivers[1].pattern == PolarPattern::kCardioid);
  CHECK(s.sim.c == 343.0);
  CHECK(s.sim.mode == RenderPath::kLut);
  CHECK_FALSE(s.sim.seed);
  CHECK(s.trajectory.empty());

  const ResolvedScene r = resolve_scene(s);
  CHECK(r.config.t_max == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(r.config.t_diff == doctest::Approx(0.175).epsilon(1e-12));
  CHECK(r.config.seed == 0);
  CHECK(r.config.fs == 16000);
  for (double b : r.room.beta) CHECK(b == doctest::Approx(-0.9397).epsilon(1e-4));
  CHECK(*r.t60 == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("explicit coefficients and durations") {
  const std::string text = R"(room:
  size: [5, 4, 3]
  beta: [0.9, 0.9, -0.8, 0.8, 0.7, 0.7]
sources: [{pos: [1, 1, 1]}, {pos: [4, 3, 2]}]
receivers: [{pos: [2, 2, 2], pattern: bidirectional, orientation: [0, 0, -1]}]
trajectory: [{pos: [1, 1, 1]}, {pos: [2, 1, 1]}]
sim: {fs: 48000, duration: 0.3, t_diff: 0.05, c: 340, mode: half16, seed: 18446744073709551615}
)";
  const Scene s = parse_scene(text);
  CHECK(s.room.beta->at(2) == -0.8);
  CHECK(s.trajectory.size() == 2);
  CHECK(s.sim.seed == 18446744073709551615ull);
  const ResolvedScene r = resolve_scene(s);
  CHECK(r.config.t_max == 0.3);
  CHECK(r.config.t_diff == 0.05);
  CHECK(r.config.speed_of_sound == 340);
  CHECK(r.config.mode.path == RenderPath::kHalf16);
  CHECK(r.room.beta == *s.room.beta);
}

TEST_CASE("duration defaults and clamping") {
  // att_diff beyond the total duration clamps t_diff to it.
  auto s = parse_scene(replace(kShoebox, "att_max_db: 60", "duration: 0.1\n  att_diff_db: 40"));
  auto r = resolve_scene(s);
  CHECK(r.config.t_max == 0.1);
  CHECK(r.config.t_diff == 0.1);

  // A rigid room has no T60: explicit durations are fine, attenuations not.
  const std::string rigid = replace(kShoebox, "t60: 0.7", "beta: [1, 1, 1, 1, 1, 1]");
  CHECK_THROWS_AS(resolve_scene(parse_scene(rigid)), NonFiniteT60);
  s = parse_scene(replace(rigid, "att_max_db: 60", "duration: 0.2"));
  r = resolve_scene(s);
  CHECK_FALSE(r.t60);
  CHECK(r.config.t_diff == 0.2);
  CHECK_THROWS_AS(resolve_scene(parse_scene(replace(rigid, "att_max_db: 60",
                                                    "duration: 0.2\n  att_diff_db: 10"))),
                  NonFiniteT60);

  CHECK_THROWS_AS(resolve_scene(parse_scene(replace(kShoebox, "t60: 0.7", "t60: 0.05"))),
                  InfeasibleTarget);
  const auto positive = resolve_scene(
      parse_scene(replace(kShoebox, "t60: 0.7", "t60: 0.7\n  beta_sign: positive")));
  CHECK(positive.room.beta[0] > 0);
}

TEST_CASE("validation errors carry line numbers") {
  CHECK(error_line(replace(kShoebox, "  t60: 0.7\n", "")) == 2);
  CHECK(error_line(replace(kShoebox, "  t60: 0.7\n", "  t60: 0.7\n  beta: [1, 1, 1, 1, 1, 1]\n")) == 2);
  CHECK(error_line(replace(kShoebox, "pos: [1, 1, 1]", "pos: [1, 9, 1]")) == 5);
  CHECK(error_line(replace(kShoebox, "cardioid", "shotgun")) == 9);
  CHECK(error_line(replace(kShoebox, "[0, 1, 0]", "[0, 1, 1]")) == 10);
  CHECK(error_line(replace(kShoebox, "fs: 16000", "fs: -1")) == 12);
  CHECK(error_line(replace(kShoebox, "fs: 16000", "fs: fast")) == 12);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "att_max_db: 60\n  duration: 1")) > 0);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "att_max_db: 60\n  colour: red")) == 14);
  CHECK(error_line(replace(kShoebox, "size: [3, 4, 2.5]", "size: [3, 4]")) == 2);
  CHECK(error_line(replace(kShoebox, "size: [3, 4, 2.5]", "size: [3, 0, 2.5]")) == 2);
  CHECK(error_line(replace(kShoebox, "receivers:\n", "receivers:\n  - pos: [1, 2\n")) > 0);
  CHECK(error_line(replace(kShoebox, "t60: 0.7", "beta: [1.2, 1, 1, 1, 1, 1]")) == 3);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "att_max_db: 60\n  mode: fp8")) == 14);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "duration: 0.1\n  t_diff: 0.2")) == 14);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "att_max_db: 60\n  grid: [3, 0, 3]")) == 14);
  CHECK(error_line(replace(kShoebox, "att_max_db: 60", "att_max_db: 60\n  seed: -4")) == 14);
  CHECK(error_line("room: [1, 2]") == 1);

  try {
    parse_scene(replace(kShoebox, "pos: [1, 1, 1]", "pos: [1, 9, 1]"), "lab.yaml");
    FAIL("expected SceneError");
  } catch (const SceneError& e) {
    CHECK(std::string(e.what()).find("lab.yaml:5:") == 0);
  }
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.yaml"), SceneError);
}

TEST_CASE("serialize then parse reproduces the scene") {
  const Scene s = parse_scene(kShoebox);
  const Scene again = parse_scene(serialize_scene(s));
  CHECK(again == s);
  CHECK(resolve_scene(again) == resolve_scene(s));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> side(2.0, 9.0);
  for (int trial = 0; trial < 50; ++trial) {
    Scene x;
    x.room.size = {side(rng), side(rng), side(rng)};
    if (trial % 2) {
      std::array<double, 6> beta;
      for (auto& b : beta) b = std::uniform_real_distribution(-1.0, 1.0)(rng);
      x.room.beta = beta;
    } else {
      x.room.t60 = std::uniform_real_distribution(0.4, 1.5)(rng);
      x.room.beta_sign = trial % 4 ? BetaSign::kPositive : BetaSign::kNegative;
    }
    for (int i = 0; i < 1 + trial % 3; ++i) x.sources.push_back(oracle::random_inside(rng, x.room.size, 0.1));
    for (int i = 0; i < 1 + trial % 4; ++i) x.receivers.push_back(oracle::random_receiver(rng, x.room.size, 0.1));
    if (trial % 5 == 0) x.trajectory = x.sources;
    x.sim.fs = trial % 3 ? 16000 : 44100;
    if (trial % 2) {
      x.sim.duration = std::uniform_real_distribution(0.2, 0.5)(rng);
      x.sim.t_diff = *x.sim.duration / 3;
    } else {
      x.sim.att_max_db = 50;
      x.sim.att_diff_db = std::uniform_real_distribution(5.0, 20.0)(rng);
    }
    x.sim.c = std::uniform_real_distribution(330.0, 350.0)(rng);
    x.sim.mode = static_cast<RenderPath>(trial % 3);
    if (trial % 3) x.sim.seed = rng();
    if (trial % 7 == 0) x.sim.grid = ImageGrid{3 + trial % 5, 5, 7};
    const std::string text = serialize_scene(x);
    CAPTURE(text);
    const Scene y = parse_scene(text);
    CHECK(y == x);
    CHECK(resolve_scene(y) == resolve_scene(x));
  }
}
