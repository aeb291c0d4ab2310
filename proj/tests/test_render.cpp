#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rirsim/error.hpp"
#include "rirsim/render.hpp"

using namespace rirsim;

namespace {

constexpr double kFs = 16000.0;

ImageSourceSet single_image(double amplitude, double delay) {
  ImageSourceSet set(1, 1, 1);
  set.amplitudes(0)[0] = amplitude;
  set.delays(0)[0] = delay;
  return set;
}

ImageSourceSet random_set(std::mt19937_64& rng, std::size_t n_src, std::size_t n_rcv,
                          std::size_t n_images, double max_delay) {
  ImageSourceSet set(n_src, n_rcv, n_images);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  std::uniform_real_distribution<double> tau(0.0, max_delay);
  for (std::size_t p = 0; p < set.n_pairs(); ++p) {
    for (std::size_t i = 0; i < n_images; ++i) {
      set.amplitudes(p)[i] = amp(rng);
      set.delays(p)[i] = tau(rng);
    }
  }
  return set;
}

float peak(std::span<const float> h) {
  float m = 0.0f;
  for (float v : h) m = std::max(m, std::abs(v));
  return m;
}

const RenderMode kDirect{RenderPath::kDirect32};
const RenderMode kLutMode{RenderPath::kLut};
const RenderMode kHalfMode{RenderPath::kHalf16};

}  // namespace

TEST_CASE("integer delay hits the sinc zeros") {
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = single_image(1.0, 100.0 / kFs);
  for (const auto& mode : {kDirect, kLutMode, kHalfMode}) {
    CAPTURE(to_string(mode.path));
    const auto h = render_rir_samples(set, 200, p, mode, 1);
    CHECK(h.channel(0)[100] == doctest::Approx(1.0).epsilon(1e-6));
    for (int k = 68; k <= 132; ++k) {
      if (k != 100) CHECK(std::abs(h.channel(0)[k]) < 1e-6);
    }
  }
}

TEST_CASE("half-sample delay") {
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = single_image(1.0, 100.5 / kFs);
  const double expect = 0.63624;
  const auto direct = render_rir_samples(set, 200, p, kDirect, 1);
  CHECK(direct.channel(0)[100] == doctest::Approx(expect).epsilon(1e-4));
  CHECK(direct.channel(0)[101] == doctest::Approx(expect).epsilon(1e-4));
  const auto lut = render_rir_samples(set, 200, p, kLutMode, 1);
  CHECK(std::abs(lut.channel(0)[100] - expect) < 1e-3);
  const auto half = render_rir_samples(set, 200, p, kHalfMode, 1);
  CHECK(std::abs(half.channel(0)[101] - expect) < 2e-3);
}

TEST_CASE("each image stays inside its window support") {
  std::mt19937_64 rng(21);
  const auto p = SincWindowParams::defaults_for(kFs);
  std::uniform_real_distribution<double> tau(0.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = tau(rng);
    const auto set = single_image(0.5, t);
    const auto lo = static_cast<long>(std::ceil((t - p.window_length / 2) * kFs));
    const auto hi = static_cast<long>(std::floor((t + p.window_length / 2) * kFs));
    for (const auto& mode : {kDirect, kLutMode, kHalfMode}) {
      const auto h = render_rir_samples(set, 900, p, mode, 1);
      for (long k = 0; k < 900; ++k) {
        if (k < lo || k > hi) REQUIRE(h.channel(0)[k] == 0.0f);
      }
    }
  }
}

TEST_CASE("direct32 matches the double-precision oracle") {
  std::mt19937_64 rng(5);
  const auto p = SincWindowParams::defaults_for(kFs);
  for (int trial = 0; trial < 5; ++trial) {
    const auto set = random_set(rng, 1, 2, 3000, 0.1);
    const auto h = render_rir(set, 0.1, p, kDirect);
    for (std::size_t pair = 0; pair < 2; ++pair) {
      std::vector<oracle::Image> imgs;
      for (std::size_t i = 0; i < set.n_images(); ++i) {
        imgs.push_back({set.amplitudes(pair)[i], set.delays(pair)[i]});
      }
      const auto ref = oracle::rir(imgs, h.n_samples(), kFs, p.window_length, p.cutoff);
      double max_ref = 0.0, max_err = 0.0;
      for (std::size_t k = 0; k < ref.size(); ++k) {
        max_ref = std::max(max_ref, std::abs(ref[k]));
        max_err = std::max(max_err, std::abs(ref[k] - h.channel(pair)[k]));
      }
      CHECK(max_err <= 1e-4 * max_ref);
    }
  }
}

TEST_CASE("lower cutoff renders a wider main lobe") {
  const SincWindowParams p{4e-3, 4000, kFs};
  const auto set = single_image(1.0, 50.25 / kFs);
  const auto direct = render_rir_samples(set, 120, p, kDirect, 1);
  const auto lut = render_rir_samples(set, 120, p, kLutMode, 1);
  const auto half = render_rir_samples(set, 120, p, kHalfMode, 1);
  for (int k = 0; k < 120; ++k) {
    const double ref = oracle::windowed_sinc(k / kFs - 50.25 / kFs, 4e-3, 4000);
    CHECK(direct.channel(0)[k] == doctest::Approx(ref).epsilon(1e-5).scale(1.0));
    CHECK(lut.channel(0)[k] == doctest::Approx(ref).epsilon(2e-3).scale(1.0));
    CHECK(half.channel(0)[k] == doctest::Approx(ref).epsilon(4e-3).scale(1.0));
  }
}

TEST_CASE("linearity under power-of-two scaling is exact in direct32") {
  std::mt19937_64 rng(6);
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = random_set(rng, 2, 2, 1500, 0.08);
  const auto base = render_rir(set, 0.08, p, kDirect);
  for (double s : {0.25, 2.0, -8.0}) {
    ImageSourceSet scaled = set;
    for (std::size_t pair = 0; pair < set.n_pairs(); ++pair) {
      for (auto& a : scaled.amplitudes(pair)) a *= s;
    }
    const auto h = render_rir(scaled, 0.08, p, kDirect);
    for (std::size_t k = 0; k < h.data().size(); ++k) {
      REQUIRE(h.data()[k] == static_cast<float>(s) * base.data()[k]);
    }
  }
}

TEST_CASE("superposition of image sets") {
  std::mt19937_64 rng(7);
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto a = random_set(rng, 1, 1, 1000, 0.06);
  const auto b = random_set(rng, 1, 1, 700, 0.06);
  ImageSourceSet both(1, 1, 1700);
  std::ranges::copy(a.amplitudes(0), both.amplitudes(0).begin());
  std::ranges::copy(a.delays(0), both.delays(0).begin());
  std::ranges::copy(b.amplitudes(0), both.amplitudes(0).begin() + 1000);
  std::ranges::copy(b.delays(0), both.delays(0).begin() + 1000);
  const auto ha = render_rir(a, 0.06, p, kDirect);
  const auto hb = render_rir(b, 0.06, p, kDirect);
  const auto hab = render_rir(both, 0.06, p, kDirect);
  const float m = peak(hab.channel(0));
  for (std::size_t k = 0; k < hab.n_samples(); ++k) {
    CHECK(std::abs(hab.channel(0)[k] - (ha.channel(0)[k] + hb.channel(0)[k])) <= 1e-6 * m);
  }
}

TEST_CASE("output does not depend on the thread count") {
  std::mt19937_64 rng(8);
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = random_set(rng, 3, 2, 5000, 0.1);
  for (const auto& mode : {kDirect, kLutMode, kHalfMode}) {
    const auto ref = render_rir(set, 0.1, p, mode, 1);
    for (unsigned threads : {2u, 3u, 8u, 13u}) {
      CHECK(render_rir(set, 0.1, p, mode, threads) == ref);
    }
  }
}

TEST_CASE("render equals the reduction tree over its leaf partials") {
  std::mt19937_64 rng(9);
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = random_set(rng, 1, 2, 2345, 0.05);
  for (std::size_t block : {1u, 7u, 100u, 512u, 5000u}) {
    for (const auto path : {RenderPath::kDirect32, RenderPath::kLut}) {
      const RenderMode mode{path, block};
      const auto h = render_rir(set, 0.05, p, mode, 4);
      for (std::size_t pair = 0; pair < 2; ++pair) {
        auto leaves = detail::render_leaf_partials(set, pair, h.n_samples(), p, mode);
        CHECK(leaves.size() == (2345 + block - 1) / block);
        const auto sum = reduce_partials(std::move(leaves));
        CHECK(std::ranges::equal(sum, h.channel(pair)));
      }
    }
  }
  CHECK_THROWS_AS(detail::render_leaf_partials(set, 0, 10, p, kHalfMode), InvalidArgument);
}

TEST_CASE("reduce_partials") {
  const std::vector<float> one{1.5f, -2.0f};
  CHECK(reduce_partials<float>({one}) == one);

  std::mt19937_64 rng(10);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> b(10000);
  for (auto& v : b) v = u(rng);
  const auto four = reduce_partials<float>({b, b, b, b}, 1);
  CHECK(four == reduce_partials<float>({b, b, b, b}, 8));
  for (std::size_t k = 0; k < b.size(); ++k) REQUIRE(four[k] == 4.0f * b[k]);

  for (std::size_t count = 1; count <= 37; ++count) {
    std::vector<std::vector<float>> parts(count, std::vector<float>(9000));
    std::vector<double> ref(9000, 0.0);
    for (auto& part : parts) {
      for (std::size_t k = 0; k < part.size(); ++k) {
        part[k] = u(rng);
        ref[k] += part[k];
      }
    }
    TreeAccumulator<float> acc;
    for (const auto& part : parts) acc.push(part);
    const auto streamed = acc.finish();
    const auto tree = reduce_partials(parts, 1);
    CHECK(tree == reduce_partials(parts, 5));
    CHECK(tree == streamed);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      REQUIRE(std::abs(tree[k] - ref[k]) <= 1e-5 * std::max(1.0, std::abs(ref[k])) * count);
    }
  }

  // Explicit tree for five leaves: ((a+b)+(c+d))+e.
  const std::vector<std::vector<float>> five{{1e8f}, {1.0f}, {-1e8f}, {1.0f}, {0.5f}};
  const float expect = ((1e8f + 1.0f) + (-1e8f + 1.0f)) + 0.5f;
  CHECK(reduce_partials(five)[0] == expect);

  CHECK_THROWS_AS(reduce_partials<float>({}), InvalidArgument);
  CHECK_THROWS_AS(reduce_partials<float>({{1.0f}, {1.0f, 2.0f}}), InvalidArgument);
  TreeAccumulator<float> empty;
  CHECK_THROWS_AS(empty.finish(), InvalidArgument);
}

TEST_CASE("render errors") {
  const auto p = SincWindowParams::defaults_for(kFs);
  const auto set = single_image(1.0, 0.01);
  CHECK_THROWS_AS(render_rir(set, 0.0, p), InvalidArgument);
  CHECK_THROWS_AS(render_rir(set, -1.0, p), InvalidArgument);
  CHECK_THROWS_AS(render_rir(ImageSourceSet(1, 1, 0), 0.1, p), InvalidArgument);
  CHECK_THROWS_AS(render_rir(set, 0.1, p, RenderMode{RenderPath::kLut, 0}), InvalidArgument);
  CHECK_THROWS_AS(render_rir(set, 1e6, p), CapacityError);
  CHECK_THROWS_AS(render_rir(set, 0.1, SincWindowParams{4e-3, 9000, kFs}), InvalidArgument);
  CHECK(render_rir(set, 1e-9, p).n_samples() == 1);
}

TEST_CASE("render path names") {
  for (auto path : {RenderPath::kDirect32, RenderPath::kLut, RenderPath::kHalf16}) {
    CHECK(parse_render_path(to_string(path)) == path);
  }
  CHECK(RenderMode{}.path == RenderPath::kLut);
  CHECK(RenderMode{}.block_size == 512);
  CHECK_THROWS_AS(parse_render_path("fp8"), InvalidArgument);
}
