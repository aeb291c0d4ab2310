#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rirsim/error.hpp"
#include "rirsim/sinc.hpp"

using namespace rirsim;

TEST_CASE("windowed sinc values") {
  const auto p = SincWindowParams::defaults_for(16000);
  CHECK(p.cutoff == 8000);
  CHECK(p.window_length == 4e-3);
  CHECK(windowed_sinc(0.0, p) == 1.0);
  CHECK(windowed_sinc(2e-3, p) == 0.0);
  CHECK(windowed_sinc(-2e-3, p) == 0.0);
  CHECK(windowed_sinc(1.0, p) == 0.0);
  CHECK(windowed_sinc(0.5 / 16000, p) == doctest::Approx(0.63624).epsilon(1e-4));
  CHECK(windowed_sinc(-0.5 / 16000, p) == windowed_sinc(0.5 / 16000, p));
  // Zeros of the sinc at whole samples.
  for (int k = 1; k < 32; ++k) CHECK(std::abs(windowed_sinc(k / 16000.0, p)) < 1e-12);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> t(-3e-3, 3e-3);
  const SincWindowParams narrow{3e-3, 5000, 16000};
  for (int i = 0; i < 10000; ++i) {
    const double x = t(rng);
    CHECK(windowed_sinc(x, narrow) ==
          doctest::Approx(oracle::windowed_sinc(x, 3e-3, 5000)).epsilon(1e-12));
  }
}

TEST_CASE("window parameter validation") {
  CHECK_NOTHROW(SincWindowParams::defaults_for(48000).validate());
  CHECK_THROWS_AS((SincWindowParams{0.0, 8000, 16000}).validate(), InvalidArgument);
  CHECK_THROWS_AS((SincWindowParams{4e-3, 8001, 16000}).validate(), InvalidArgument);
  CHECK_THROWS_AS((SincWindowParams{4e-3, 0.0, 16000}).validate(), InvalidArgument);
  CHECK_THROWS_AS((SincWindowParams{4e-3, 100, -1}).validate(), InvalidArgument);
  CHECK_THROWS_AS(build_lut(SincWindowParams::defaults_for(16000), 0), InvalidArgument);
}

TEST_CASE("lut layout") {
  const auto p = SincWindowParams::defaults_for(16000);
  const SincLut lut = build_lut(p, 16);
  REQUIRE(lut.entries.size() == 1025);
  CHECK(lut.center == 512);
  CHECK(lut.entries[512] == 1.0f);
  CHECK(lut.entries.front() == 0.0f);
  CHECK(lut.entries.back() == 0.0f);
  CHECK(std::abs(lut.entries[512 + 16]) < 1e-7);
  for (std::size_t i = 0; i < lut.entries.size(); ++i) {
    CHECK(std::abs(lut.entries[i] - lut.entries[lut.entries.size() - 1 - i]) <= 1e-7);
    const double t = (static_cast<double>(i) - 512) / (16 * 16000.0);
    CHECK(lut.entries[i] == doctest::Approx(oracle::windowed_sinc(t, 4e-3, 8000)).epsilon(1e-6));
  }
  // A window that does not span a whole number of steps rounds up.
  const SincLut odd = build_lut({4.1e-3, 8000, 16000}, 16);
  CHECK(odd.entries.size() % 2 == 1);
  CHECK(odd.center == 525);
}

TEST_CASE("lut lookup interpolates between entries") {
  const auto p = SincWindowParams::defaults_for(16000);
  const SincLut lut = build_lut(p, 16);
  const double step = 1.0 / (16 * 16000.0);
  for (int n = -500; n <= 500; n += 37) {
    CHECK(lut_lookup(lut, n * step) == doctest::Approx(lut.entries[n + 512]).epsilon(1e-6));
    const float mid = 0.5f * (lut.entries[n + 512] + lut.entries[n + 513]);
    CHECK(lut_lookup(lut, (n + 0.5) * step) == doctest::Approx(mid).epsilon(1e-6));
  }
  CHECK(lut_lookup(lut, 2e-3) == 0.0f);
  CHECK(lut_lookup(lut, -2.5e-3) == 0.0f);
  CHECK(lut_lookup_samples(lut, 32.0f) == 0.0f);
  CHECK(lut_lookup_samples(lut, 0.0f) == 1.0f);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> t(-2.2e-3, 2.2e-3);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const double x = t(rng);
    worst = std::max(worst, std::abs(lut_lookup(lut, x) - oracle::windowed_sinc(x, 4e-3, 8000)));
    if (i % 1000 == 0) {
      CHECK(lut_lookup_samples(lut, static_cast<float>(x * 16000)) ==
            doctest::Approx(lut_lookup(lut, x)).epsilon(1e-4).scale(1.0));
    }
  }
  CHECK(worst <= 2e-3);
}

TEST_CASE("polynomial trig values") {
  CHECK(reduced_sin_pi(0.0f) == 0.0f);
  CHECK(reduced_cos_pi(0.0f) == 1.0f);
  CHECK(reduced_sin_pi(0.5f) == doctest::Approx(0.999938965).epsilon(1e-7));
  CHECK(reduced_sin_pi(1.25f) == doctest::Approx(-0.707045).epsilon(1e-5));
  CHECK(reduced_sin_pi(Half(0.0f)).to_float() == 0.0f);
  CHECK(reduced_cos_pi(Half(0.0f)).to_float() == 1.0f);
  CHECK(reduced_sin_pi(Half(0.5f)).to_float() == doctest::Approx(0.999938965).epsilon(1e-3));
  CHECK(reduced_sin_pi(Half(1.25f)).to_float() == doctest::Approx(-0.707045).epsilon(2e-3));
}

TEST_CASE("polynomial sin is odd and sign-correct") {
  for (std::uint32_t b = 0; b < 0x7c00; ++b) {
    const Half x = Half::from_bits(static_cast<std::uint16_t>(b));
    const float xf = x.to_float();
    if (xf > 4.0f) break;
    const float s = reduced_sin_pi(x).to_float();
    REQUIRE(reduced_sin_pi(-x).to_float() == -s);
    const double truth = std::sin(std::numbers::pi * xf);
    if (xf == std::floor(xf)) {
      CHECK(s == 0.0f);
    } else {
      REQUIRE((s > 0) == (truth > 0));
    }
  }
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> x(-4.0f, 4.0f);
  for (int i = 0; i < 100000; ++i) {
    const float v = x(rng);
    const float s = reduced_sin_pi(v);
    REQUIRE(reduced_sin_pi(-v) == -s);
    const double truth = std::sin(std::numbers::pi * v);
    if (std::abs(truth) > 1e-6) REQUIRE((s > 0) == (truth > 0));
  }
}
