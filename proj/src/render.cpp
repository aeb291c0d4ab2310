#include "rirsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rirsim/error.hpp"
#include "rirsim/half.hpp"
#include "rirsim/parallel.hpp"

namespace rirsim {

RirTensor::RirTensor(std::size_t n_sources, std::size_t n_receivers, std::size_t n_samples,
                     double fs)
    : n_sources_(n_sources),
      n_receivers_(n_receivers),
      n_samples_(n_samples),
      fs_(fs),
      data_(n_sources * n_receivers * n_samples, 0.0f) {}

std::string_view to_string(RenderPath path) {
  switch (path) {
    case RenderPath::kDirect32: return "direct32";
    case RenderPath::kLut: return "lut";
    case RenderPath::kHalf16: return "half16";
  }
  return "lut";
}

RenderPath parse_render_path(std::string_view name) {
  for (auto p : {RenderPath::kDirect32, RenderPath::kLut, RenderPath::kHalf16}) {
    if (name == to_string(p)) return p;
  }
  throw InvalidArgument("unknown render mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Reduction

template <class T>
std::vector<T> reduce_partials(std::vector<std::vector<T>> partials, unsigned threads) {
  if (partials.empty()) throw InvalidArgument("reduce_partials needs at least one buffer");
  const std::size_t length = partials.front().size();
  for (const auto& p : partials) {
    if (p.size() != length) throw InvalidArgument("partial buffers differ in length");
  }

  // Split the sample axis into fixed ranges; every element sees the same tree.
  const std::size_t workers = std::max<std::size_t>(1, resolve_threads(threads));
  const std::size_t n_ranges = std::min(workers, std::max<std::size_t>(1, length / 4096));
  const std::size_t range = (length + n_ranges - 1) / n_ranges;

  std::size_t count = partials.size();
  while (count > 1) {
    const std::size_t pairs = count / 2;
    parallel_for(n_ranges, threads, [&](std::size_t r, unsigned) {
      const std::size_t lo = r * range;
      const std::size_t hi = std::min(length, lo + range);
      for (std::size_t i = 0; i < pairs; ++i) {
        T* dst = partials[2 * i].data();
        const T* src = partials[2 * i + 1].data();
        for (std::size_t k = lo; k < hi; ++k) dst[k] = dst[k] + src[k];
      }
    });
    for (std::size_t i = 0; i < pairs; ++i) {
      if (i != 0) partials[i] = std::move(partials[2 * i]);
    }
    if (count % 2 == 1) partials[pairs] = std::move(partials[count - 1]);
    count = pairs + count % 2;
  }
  return std::move(partials.front());
}

template <class T>
void TreeAccumulator<T>::push(std::vector<T> leaf) {
  stack_.push_back({std::move(leaf), 0});
  while (stack_.size() >= 2 && stack_[stack_.size() - 1].level == stack_[stack_.size() - 2].level) {
    Node right = std::move(stack_.back());
    stack_.pop_back();
    Node& left = stack_.back();
    for (std::size_t k = 0; k < left.sum.size(); ++k) left.sum[k] = left.sum[k] + right.sum[k];
    ++left.level;
  }
}

template <class T>
std::vector<T> TreeAccumulator<T>::finish() {
  if (stack_.empty()) throw InvalidArgument("TreeAccumulator::finish on empty accumulator");
  // Remaining nodes are aligned subtrees of strictly decreasing size; the
  // level-wise tree combines them right to left.
  while (stack_.size() > 1) {
    Node right = std::move(stack_.back());
    stack_.pop_back();
    Node& left = stack_.back();
    for (std::size_t k = 0; k < left.sum.size(); ++k) left.sum[k] = left.sum[k] + right.sum[k];
  }
  std::vector<T> out = std::move(stack_.back().sum);
  stack_.clear();
  return out;
}

template std::vector<float> reduce_partials(std::vector<std::vector<float>>, unsigned);
template std::vector<Half> reduce_partials(std::vector<std::vector<Half>>, unsigned);
template class TreeAccumulator<float>;
template class TreeAccumulator<Half>;

// ---------------------------------------------------------------------------
// Per-sample kernels. x is the offset k - tau * fs in samples, computed in
// 32-bit arithmetic.

namespace {

struct Direct32Kernel {
  using Value = float;
  float half_window;  // W / 2 in samples
  float window_omega;  // 2 pi / W
  float sinc_omega;    // 2 pi f_c / fs

  float operator()(float x) const {
    if (!(std::abs(x) < half_window)) return 0.0f;
    const float window = 0.5f * (1.0f + std::cos(window_omega * x));
    const float arg = sinc_omega * x;
    const float sinc = arg == 0.0f ? 1.0f : std::sin(arg) / arg;
    return window * sinc;
  }
  float amplitude(double a) const { return static_cast<float>(a); }
};

struct LutKernel {
  using Value = float;
  const SincLut* lut;

  float operator()(float x) const { return lut_lookup_samples(*lut, x); }
  float amplitude(double a) const { return static_cast<float>(a); }
};

struct Half16Kernel {
  using Value = Half;
  float half_window;
  Half inv_window;  // 1 / W, so x / W lies in (-0.5, 0.5)
  Half sinc_scale;  // 2 f_c / fs
  Half pi{std::numbers::pi_v<float>};

  Half operator()(float x32) const {
    if (!(std::abs(x32) < half_window)) return Half{};
    const Half x(x32);
    // 0.5 (1 + cos(2 pi x / W)) == cos^2(pi x / W); the argument needs no reduction.
    const Half c = reduced_cos_pi(x * inv_window);
    const Half window = c * c;
    const Half y = x * sinc_scale;
    if (y.to_float() == 0.0f) return window;
    const Half sinc = reduced_sin_pi(y) / (pi * y);
    return window * sinc;
  }
  Half amplitude(double a) const { return Half(static_cast<float>(a)); }
};

template <class Kernel>
void render_block(const Kernel& kernel, std::span<const double> amps, std::span<const double> taus,
                  double fs, double half_window, std::span<typename Kernel::Value> out) {
  using V = typename Kernel::Value;
  const auto n = static_cast<std::int64_t>(out.size());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double tau_s = taus[i] * fs;
    const auto lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(tau_s - half_window)));
    const auto hi = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::floor(tau_s + half_window)));
    if (lo > hi) continue;
    const double base = std::floor(tau_s);
    const auto i0 = static_cast<std::int64_t>(base);
    const auto frac = static_cast<float>(tau_s - base);
    const V amp = kernel.amplitude(amps[i]);
    for (std::int64_t k = lo; k <= hi; ++k) {
      const float x = static_cast<float>(k - i0) - frac;
      out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k)] + amp * kernel(x);
    }
  }
}

struct RenderJob {
  const ImageSourceSet& set;
  std::size_t n_samples;
  double fs;
  double half_window;
  std::size_t block;

  std::size_t leaves() const { return (set.n_images() + block - 1) / block; }

  template <class Kernel>
  void leaf(const Kernel& kernel, std::size_t pair, std::size_t index,
            std::span<typename Kernel::Value> out) const {
    const std::size_t first = index * block;
    const std::size_t count = std::min(block, set.n_images() - first);
    render_block(kernel, set.amplitudes(pair).subspan(first, count),
                 set.delays(pair).subspan(first, count), fs, half_window, out);
  }
};

template <class Kernel>
void render_all(const RenderJob& job, const Kernel& kernel, unsigned threads, RirTensor& out) {
  using V = typename Kernel::Value;
  const std::size_t pairs = job.set.n_pairs();
  const std::size_t leaves = job.leaves();
  const std::size_t workers = resolve_threads(threads);

  // Aligned power-of-two chunks of leaves are complete subtrees of the
  // reduction tree, so the chunk size only affects scheduling.
  std::size_t chunk = 1;
  while (chunk < leaves && pairs * ((leaves + 2 * chunk - 1) / (2 * chunk)) >= 4 * workers) {
    chunk *= 2;
  }
  const std::size_t chunks = (leaves + chunk - 1) / chunk;

  std::vector<std::vector<V>> nodes(pairs * chunks);
  parallel_for(pairs * chunks, threads, [&](std::size_t task, unsigned) {
    const std::size_t pair = task / chunks;
    const std::size_t first = (task % chunks) * chunk;
    const std::size_t last = std::min(leaves, first + chunk);
    TreeAccumulator<V> acc;
    for (std::size_t leaf = first; leaf < last; ++leaf) {
      std::vector<V> buffer(job.n_samples, V{});
      job.leaf(kernel, pair, leaf, std::span<V>(buffer));
      acc.push(std::move(buffer));
    }
    nodes[task] = acc.finish();
  });

  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(workers, pairs));
  const unsigned inner = static_cast<unsigned>(std::max<std::size_t>(1, workers / outer));
  parallel_for(pairs, outer, [&](std::size_t pair, unsigned) {
    std::vector<std::vector<V>> group(std::make_move_iterator(nodes.begin() + pair * chunks),
                                      std::make_move_iterator(nodes.begin() + (pair + 1) * chunks));
    const std::vector<V> sum = reduce_partials(std::move(group), inner);
    auto dst = out.channel(pair);
    for (std::size_t k = 0; k < sum.size(); ++k) dst[k] = static_cast<float>(sum[k]);
  });
}

Direct32Kernel make_direct32(const SincWindowParams& p) {
  const double w = p.window_samples();
  return {static_cast<float>(w / 2.0), static_cast<float>(2.0 * std::numbers::pi / w),
          static_cast<float>(2.0 * std::numbers::pi * p.cutoff / p.fs)};
}

Half16Kernel make_half16(const SincWindowParams& p) {
  const double w = p.window_samples();
  return {static_cast<float>(w / 2.0), Half(static_cast<float>(1.0 / w)),
          Half(static_cast<float>(2.0 * p.cutoff / p.fs))};
}

void check_inputs(const ImageSourceSet& set, const SincWindowParams& params,
                  const RenderMode& mode) {
  params.validate();
  if (set.n_pairs() == 0 || set.n_images() == 0) {
    throw InvalidArgument("image source set is empty");
  }
  if (mode.block_size < 1) throw InvalidArgument("block size must be >= 1");
}

}  // namespace

RirTensor render_rir_samples(const ImageSourceSet& set, std::size_t n_samples,
                             const SincWindowParams& params, const RenderMode& mode,
                             unsigned threads) {
  check_inputs(set, params, mode);
  if (n_samples < 1) throw InvalidArgument("RIR needs at least one sample");
  if (n_samples > kMaxTensorSamples / set.n_pairs()) {
    throw CapacityError("RIR tensor of " + std::to_string(set.n_pairs()) + " x " +
                        std::to_string(n_samples) + " samples exceeds the buffer limit");
  }

  RirTensor out(set.n_sources(), set.n_receivers(), n_samples, params.fs);
  const RenderJob job{set, n_samples, params.fs, params.window_samples() / 2.0, mode.block_size};
  switch (mode.path) {
    case RenderPath::kDirect32:
      render_all(job, make_direct32(params), threads, out);
      break;
    case RenderPath::kLut: {
      const SincLut lut = build_lut(params, mode.lut_oversampling);
      render_all(job, LutKernel{&lut}, threads, out);
      break;
    }
    case RenderPath::kHalf16:
      render_all(job, make_half16(params), threads, out);
      break;
  }
  return out;
}

RirTensor render_rir(const ImageSourceSet& set, double duration, const SincWindowParams& params,
                     const RenderMode& mode, unsigned threads) {
  params.validate();
  if (!(duration > 0.0)) throw InvalidArgument("RIR duration must be positive");
  const double samples = std::ceil(duration * params.fs);
  if (!(samples <= static_cast<double>(kMaxTensorSamples))) {
    throw CapacityError("RIR duration exceeds the buffer limit");
  }
  return render_rir_samples(set, static_cast<std::size_t>(samples), params, mode, threads);
}

namespace detail {

std::vector<std::vector<float>> render_leaf_partials(const ImageSourceSet& set, std::size_t pair,
                                                     std::size_t n_samples,
                                                     const SincWindowParams& params,
                                                     const RenderMode& mode) {
  check_inputs(set, params, mode);
  const RenderJob job{set, n_samples, params.fs, params.window_samples() / 2.0, mode.block_size};
  std::vector<std::vector<float>> leaves(job.leaves(), std::vector<float>(n_samples, 0.0f));
  SincLut lut;
  if (mode.path == RenderPath::kLut) lut = build_lut(params, mode.lut_oversampling);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    switch (mode.path) {
      case RenderPath::kDirect32:
        job.leaf(make_direct32(params), pair, i, std::span<float>(leaves[i]));
        break;
      case RenderPath::kLut:
        job.leaf(LutKernel{&lut}, pair, i, std::span<float>(leaves[i]));
        break;
      case RenderPath::kHalf16:
        throw InvalidArgument("leaf partials are not exposed for the half16 path");
    }
  }
  return leaves;
}

}  // namespace detail

}  // namespace rirsim
