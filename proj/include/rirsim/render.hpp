#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rirsim/image_source.hpp"
#include "rirsim/sinc.hpp"

namespace rirsim {

// Sample buffer indexed [source][receiver][time].
class RirTensor {
 public:
  RirTensor() = default;
  RirTensor(std::size_t n_sources, std::size_t n_receivers, std::size_t n_samples, double fs);

  std::size_t n_sources() const { return n_sources_; }
  std::size_t n_receivers() const { return n_receivers_; }
  std::size_t n_channels() const { return n_sources_ * n_receivers_; }
  std::size_t n_samples() const { return n_samples_; }
  double fs() const { return fs_; }

  std::span<float> channel(std::size_t src, std::size_t rcv) {
    return channel(src * n_receivers_ + rcv);
  }
  std::span<const float> channel(std::size_t src, std::size_t rcv) const {
    return channel(src * n_receivers_ + rcv);
  }
  std::span<float> channel(std::size_t index) {
    return std::span(data_).subspan(index * n_samples_, n_samples_);
  }
  std::span<const float> channel(std::size_t index) const {
    return std::span(data_).subspan(index * n_samples_, n_samples_);
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  friend bool operator==(const RirTensor&, const RirTensor&) = default;

 private:
  std::size_t n_sources_ = 0;
  std::size_t n_receivers_ = 0;
  std::size_t n_samples_ = 0;
  double fs_ = 0.0;
  std::vector<float> data_;
};

enum class RenderPath {
  kDirect32,  // float arithmetic with library sin/cos
  kLut,       // oversampled windowed-sinc table, linear interpolation
  kHalf16,    // binary16 arithmetic with polynomial sin/cos
};

std::string_view to_string(RenderPath path);
RenderPath parse_render_path(std::string_view name);

inline constexpr std::size_t kDefaultBlockSize = 512;

struct RenderMode {
  RenderPath path = RenderPath::kLut;
  std::size_t block_size = kDefaultBlockSize;  // images per partial sum
  int lut_oversampling = kDefaultLutOversampling;

  friend bool operator==(const RenderMode&, const RenderMode&) = default;
};

// Largest tensor (in samples) render_rir will allocate.
inline constexpr std::size_t kMaxTensorSamples = std::size_t{1} << 32;

// Renders h[k] = sum_n A_n d'(k / fs - tau_n) for k < ceil(duration * fs).
// Images are summed sequentially in blocks of mode.block_size; block partials
// are combined with reduce_partials. The output does not depend on `threads`.
RirTensor render_rir(const ImageSourceSet& set, double duration, const SincWindowParams& params,
                     const RenderMode& mode = {}, unsigned threads = 0);

// Same as render_rir with an explicit sample count.
RirTensor render_rir_samples(const ImageSourceSet& set, std::size_t n_samples,
                             const SincWindowParams& params, const RenderMode& mode = {},
                             unsigned threads = 0);

// Elementwise sum of equal-length buffers over a fixed pairwise tree: at
// each level buffer i becomes buffer 2i + buffer 2i+1, an odd last buffer is
// carried up unchanged. `threads` only splits the sample axis.
template <class T>
std::vector<T> reduce_partials(std::vector<std::vector<T>> partials, unsigned threads = 1);

// Streams leaves in order and produces exactly the reduce_partials result
// while holding O(log n) buffers.
template <class T>
class TreeAccumulator {
 public:
  void push(std::vector<T> leaf);
  std::vector<T> finish();

 private:
  struct Node {
    std::vector<T> sum;
    int level;
  };
  std::vector<Node> stack_;
};

namespace detail {

// Leaf partials of one (source, receiver) pair, one per image block, in the
// storage precision of the render path (float for direct32 and lut).
std::vector<std::vector<float>> render_leaf_partials(const ImageSourceSet& set, std::size_t pair,
                                                     std::size_t n_samples,
                                                     const SincWindowParams& params,
                                                     const RenderMode& mode);

}  // namespace detail

}  // namespace rirsim
